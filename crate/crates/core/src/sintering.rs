//! Microwave sintering: a 1-D absorption simulator for energy per area, and
//! the trade-level process model driven by energy-per-area constants.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::params::{PadGeometry, ParameterSet, Zone};
use crate::process::{Attachment, Equipment, Process, ProcessResult, Subsystem};

const DEFAULT_DECAY_TABLE: &str = include_str!("../data/decay_constants.csv");

/// Specific heat of basalt regolith, C(T) = a + bT + c/T² + d/√T in J/kg/K
/// with T in °C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecificHeatFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Default for SpecificHeatFit {
    fn default() -> Self {
        Self {
            a: 2337.0,
            b: -0.2773,
            c: 220.2e5,
            d: -29760.0,
        }
    }
}

impl SpecificHeatFit {
    pub fn eval(&self, t: f64) -> Result<f64, ModelError> {
        if t <= 0.0 || !t.is_finite() {
            return Err(ModelError::Domain {
                what: "specific heat temperature (degC)",
                value: t,
            });
        }
        Ok(self.a + self.b * t + self.c / (t * t) + self.d / t.sqrt())
    }

    /// Mean over [t0, t1] °C by the trapezoid rule on a grid no coarser than 1 °C.
    pub fn mean(&self, t0: f64, t1: f64) -> Result<f64, ModelError> {
        self.mean_shifted(t0, t1, 0.0)
    }

    /// Mean over [t0, t1] °C with the fit evaluated at absolute temperature
    /// (T + 273.15). This is the convention behind the 1095.19 J/kg/K mold
    /// average; the °C evaluation gives about 1001 over 127-1200 °C.
    pub fn mean_absolute(&self, t0: f64, t1: f64) -> Result<f64, ModelError> {
        self.mean_shifted(t0, t1, 273.15)
    }

    fn mean_shifted(&self, t0: f64, t1: f64, shift: f64) -> Result<f64, ModelError> {
        let n = ((t1 - t0).abs().ceil() as usize).max(1);
        let h = (t1 - t0) / n as f64;
        let mut s = 0.5 * (self.eval(t0 + shift)? + self.eval(t1 + shift)?);
        for i in 1..n {
            s += self.eval(t0 + shift + h * i as f64)?;
        }
        Ok(s / n as f64)
    }
}

/// Specific heat of basalt with the default fit coefficients.
pub fn specific_heat_basalt(t: f64) -> Result<f64, ModelError> {
    SpecificHeatFit::default().eval(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialModel {
    /// (°C, 1/m) pairs sorted by temperature.
    pub decay_table: Vec<(f64, f64)>,
    pub specific_heat: SpecificHeatFit,
    pub density: f64,
    pub start_temperature_c: f64,
    pub sinter_temperature_c: f64,
    /// Above this temperature the decay constant is held at its value here.
    pub flat_above_c: f64,
}

impl Default for MaterialModel {
    fn default() -> Self {
        let table = parse_decay_table(DEFAULT_DECAY_TABLE.as_bytes()).expect("shipped table is valid");
        Self {
            decay_table: table,
            specific_heat: SpecificHeatFit::default(),
            density: 2200.0,
            start_temperature_c: 127.0,
            sinter_temperature_c: 1200.0,
            flat_above_c: 1079.0,
        }
    }
}

/// Reads a `temperature_c,decay_constant_per_m` CSV.
pub fn parse_decay_table<R: Read>(r: R) -> Result<Vec<(f64, f64)>, ModelError> {
    #[derive(Deserialize)]
    struct Row {
        temperature_c: f64,
        decay_constant_per_m: f64,
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: Row = row?;
        out.push((row.temperature_c, row.decay_constant_per_m));
    }
    check_decay_table(&out)?;
    Ok(out)
}

fn check_decay_table(t: &[(f64, f64)]) -> Result<(), ModelError> {
    if t.is_empty() {
        return Err(ModelError::MaterialTable("no rows".into()));
    }
    if t.iter().any(|&(_, a)| !(a > 0.0 && a.is_finite())) {
        return Err(ModelError::MaterialTable("decay constants must be positive".into()));
    }
    if t.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(ModelError::MaterialTable(
            "temperatures must be strictly increasing".into(),
        ));
    }
    Ok(())
}

impl MaterialModel {
    pub fn with_decay_table(table: Vec<(f64, f64)>) -> Result<Self, ModelError> {
        check_decay_table(&table)?;
        Ok(Self {
            decay_table: table,
            ..Self::default()
        })
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        check_decay_table(&self.decay_table)?;
        if !(self.density > 0.0) {
            return Err(ModelError::MaterialTable("density must be positive".into()));
        }
        Ok(())
    }

    /// Decay constant in 1/m, linearly interpolated, flat outside the table
    /// and above `flat_above_c`.
    pub fn decay_constant(&self, t: f64) -> f64 {
        let t = t.min(self.flat_above_c);
        let tab = &self.decay_table;
        if t <= tab[0].0 {
            return tab[0].1;
        }
        let last = tab[tab.len() - 1];
        if t >= last.0 {
            return last.1;
        }
        let i = tab.partition_point(|&(x, _)| x <= t);
        let (t0, a0) = tab[i - 1];
        let (t1, a1) = tab[i];
        a0 + (a1 - a0) * (t - t0) / (t1 - t0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinterSimResult {
    pub energy_kwh_per_m2: f64,
    pub elapsed_s: f64,
    /// (depth of cell centre m, °C)
    pub profile: Vec<(f64, f64)>,
    pub dt_s: f64,
    pub dz_m: f64,
    pub steps: usize,
    /// Largest per-step relative imbalance between injected and
    /// absorbed-plus-transmitted energy.
    pub max_balance_error: f64,
    pub max_temperature_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// Total modelled column depth; flux reaching the bottom leaves the column.
    pub column_depth_m: f64,
    pub max_steps: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            column_depth_m: 0.3,
            max_steps: 200_000,
        }
    }
}

pub fn simulate_microwave_column(
    flux_kw_m2: f64,
    m: &MaterialModel,
    target_depth_m: f64,
    dt: f64,
    dz: f64,
) -> Result<SinterSimResult, ModelError> {
    simulate_microwave_column_with(flux_kw_m2, m, target_depth_m, dt, dz, SimOptions::default(), |_, _| {})
}

/// Runs the column simulation, calling `observe(step, temperatures)` after
/// every step.
pub fn simulate_microwave_column_with<F: FnMut(usize, &[f64])>(
    flux_kw_m2: f64,
    m: &MaterialModel,
    target_depth_m: f64,
    dt: f64,
    dz: f64,
    opts: SimOptions,
    mut observe: F,
) -> Result<SinterSimResult, ModelError> {
    m.validate()?;
    if !(flux_kw_m2 >= 0.0) {
        return Err(ModelError::Domain {
            what: "flux (kW/m2)",
            value: flux_kw_m2,
        });
    }
    if !(dt > 0.0) || !(dz > 0.0) {
        return Err(ModelError::Domain {
            what: "grid spacing",
            value: dt.min(dz),
        });
    }
    let nt = (target_depth_m / dz).round();
    if nt < 1.0 || ((nt * dz - target_depth_m) / dz).abs() > 1e-6 {
        return Err(ModelError::Domain {
            what: "target depth (not a multiple of dz)",
            value: target_depth_m,
        });
    }
    let nt = nt as usize;
    let n = ((opts.column_depth_m / dz).round() as usize).max(nt);
    let flux = flux_kw_m2 * 1e3;
    let heat_cap_per_area = m.density * dz;
    let mut temp = vec![m.start_temperature_c; n];
    let mut max_err: f64 = 0.0;
    let mut elapsed = 0.0;

    for step in 1..=opts.max_steps {
        let mut f = flux;
        let mut absorbed_total = 0.0;
        for t in temp.iter_mut() {
            let trans = (-m.decay_constant(*t) * dz).exp();
            let absorbed = f * (1.0 - trans);
            f -= absorbed;
            absorbed_total += absorbed;
            let c = m.specific_heat.eval(*t)?;
            if c <= 0.0 {
                return Err(ModelError::Domain {
                    what: "temperature (specific heat fit not positive)",
                    value: *t,
                });
            }
            *t += absorbed * dt / (heat_cap_per_area * c);
        }
        if flux > 0.0 {
            let err = ((absorbed_total + f) - flux).abs() / flux;
            max_err = max_err.max(err);
        }
        elapsed = dt * step as f64;
        observe(step, &temp);
        let mean = temp[..nt].iter().sum::<f64>() / nt as f64;
        if mean >= m.sinter_temperature_c {
            let profile = temp
                .iter()
                .enumerate()
                .map(|(i, &t)| ((i as f64 + 0.5) * dz, t))
                .collect();
            return Ok(SinterSimResult {
                energy_kwh_per_m2: flux * elapsed / 3.6e6,
                elapsed_s: elapsed,
                profile,
                dt_s: dt,
                dz_m: dz,
                steps: step,
                max_balance_error: max_err,
                max_temperature_c: temp.iter().cloned().fold(f64::MIN, f64::max),
            });
        }
    }
    let _ = elapsed;
    Err(ModelError::NoConvergence { steps: opts.max_steps })
}

/// Magnetron system mass in kg for a consumed power in W.
pub fn magnetron_mass(power_w: f64, p: &ParameterSet) -> f64 {
    power_w / p.magnetron_power_to_mass * p.magnetron_mass_factor
}

pub fn sinter_energy_per_m2(zone: Zone, p: &ParameterSet) -> f64 {
    match zone {
        Zone::Inner => p.inner_sinter_energy_per_m2,
        Zone::Outer => p.outer_sinter_energy_per_m2,
    }
}

/// Sintering a zone with `power_kw` of consumed electrical power.
pub fn sinter_zone(zone: Zone, power_kw: f64, p: &ParameterSet, g: &PadGeometry) -> ProcessResult {
    let consumed = power_kw * 1e3;
    let applied_power = consumed * p.magnetron_efficiency;
    let applied_energy = g.area(zone) * sinter_energy_per_m2(zone, p);
    let time = applied_energy / applied_power;
    let energy = applied_energy / p.magnetron_efficiency;
    let mag = magnetron_mass(consumed, p);
    let rovers = (mag / p.max_sinter_payload - 1e-9).ceil().max(1.0) as u32;
    let mut hours = BTreeMap::new();
    hours.insert(Subsystem::Sintering, time / 3600.0);
    ProcessResult::assemble(
        Process::Sintering,
        zone,
        power_kw,
        time,
        energy,
        vec![Attachment {
            equipment: Equipment::Magnetrons,
            mass_kg: mag,
        }],
        0.0,
        rovers,
        consumed,
        hours,
        p,
    )
}
