//! Case composition and the cost streams: transport, development, program
//! delay, energy and operations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::gravel::gravel_process;
use crate::params::{DevCostCharging, PadGeometry, ParameterSet, Zone};
use crate::pavers::paver_process;
use crate::polymer::polymer_process;
use crate::process::{Equipment, ProcessResult, Subsystem};
use crate::reliability::HoursRow;
use crate::sintering::sinter_zone;
use crate::siteprep::{compact_scaled, grade_scaled};

pub const DAYS_PER_YEAR: f64 = 365.25;
const HOURS_PER_YEAR: f64 = 8760.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technology {
    Sintering,
    Pavers,
    Gravel,
    Polymer,
}

impl Technology {
    pub fn code(self) -> &'static str {
        match self {
            Technology::Sintering => "Si",
            Technology::Pavers => "Pa",
            Technology::Gravel => "Gr",
            Technology::Polymer => "Po",
        }
    }
}

/// Inner-zone and outer-zone technology pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Case {
    SiSi,
    SiGr,
    SiPa,
    SiPo,
    PaSi,
    PaGr,
    PaPa,
    PaPo,
}

impl Case {
    pub const ALL: [Case; 8] = [
        Case::SiSi,
        Case::SiGr,
        Case::SiPa,
        Case::SiPo,
        Case::PaSi,
        Case::PaGr,
        Case::PaPa,
        Case::PaPo,
    ];

    pub fn inner(self) -> Technology {
        match self {
            Case::SiSi | Case::SiGr | Case::SiPa | Case::SiPo => Technology::Sintering,
            _ => Technology::Pavers,
        }
    }

    pub fn outer(self) -> Technology {
        match self {
            Case::SiSi | Case::PaSi => Technology::Sintering,
            Case::SiGr | Case::PaGr => Technology::Gravel,
            Case::SiPa | Case::PaPa => Technology::Pavers,
            Case::SiPo | Case::PaPo => Technology::Polymer,
        }
    }

    /// Scale knobs this case depends on, site preparation first.
    pub fn knobs(self) -> Vec<Knob> {
        let mut k = vec![Knob::SitePrep, Knob::from(self.inner())];
        let o = Knob::from(self.outer());
        if !k.contains(&o) {
            k.push(o);
        }
        k
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Case::SiSi => "SiSi",
            Case::SiGr => "SiGr",
            Case::SiPa => "SiPa",
            Case::SiPo => "SiPo",
            Case::PaSi => "PaSi",
            Case::PaGr => "PaGr",
            Case::PaPa => "PaPa",
            Case::PaPo => "PaPo",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Case {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Case::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown case `{s}` (expected one of SiSi, SiGr, SiPa, SiPo, PaSi, PaGr, PaPa, PaPo)")
            })
    }
}

/// One independently scaled piece of hardware.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Knob {
    SitePrep,
    Sintering,
    Pavers,
    Gravel,
    Polymer,
}

impl From<Technology> for Knob {
    fn from(t: Technology) -> Self {
        match t {
            Technology::Sintering => Knob::Sintering,
            Technology::Pavers => Knob::Pavers,
            Technology::Gravel => Knob::Gravel,
            Technology::Polymer => Knob::Polymer,
        }
    }
}

impl Knob {
    pub const ALL: [Knob; 5] = [
        Knob::SitePrep,
        Knob::Sintering,
        Knob::Pavers,
        Knob::Gravel,
        Knob::Polymer,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Knob::SitePrep => "site_prep",
            Knob::Sintering => "sintering_kw",
            Knob::Pavers => "pavers",
            Knob::Gravel => "gravel",
            Knob::Polymer => "polymer",
        }
    }
}

/// Hardware scale per knob: consumed kW for sintering, fleet multipliers
/// elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleSet {
    pub site_prep: f64,
    pub sintering_kw: f64,
    pub pavers: f64,
    pub gravel: f64,
    pub polymer: f64,
}

impl ScaleSet {
    /// The non-optimized hardware set.
    pub fn nominal(p: &ParameterSet) -> Self {
        Self {
            site_prep: 1.0,
            sintering_kw: p.sinter_power / 1e3,
            pavers: 1.0,
            gravel: 1.0,
            polymer: 1.0,
        }
    }

    pub fn get(&self, k: Knob) -> f64 {
        match k {
            Knob::SitePrep => self.site_prep,
            Knob::Sintering => self.sintering_kw,
            Knob::Pavers => self.pavers,
            Knob::Gravel => self.gravel,
            Knob::Polymer => self.polymer,
        }
    }

    pub fn set(&mut self, k: Knob, v: f64) {
        match k {
            Knob::SitePrep => self.site_prep = v,
            Knob::Sintering => self.sintering_kw = v,
            Knob::Pavers => self.pavers = v,
            Knob::Gravel => self.gravel = v,
            Knob::Polymer => self.polymer = v,
        }
    }

    /// Multiplies every knob by `m`.
    pub fn times(&self, m: f64) -> Self {
        Self {
            site_prep: self.site_prep * m,
            sintering_kw: self.sintering_kw * m,
            pavers: self.pavers * m,
            gravel: self.gravel * m,
            polymer: self.polymer * m,
        }
    }
}

/// Process result for one technology in one zone.
pub fn technology_process(t: Technology, zone: Zone, s: &ScaleSet, p: &ParameterSet, g: &PadGeometry) -> ProcessResult {
    match t {
        Technology::Sintering => sinter_zone(zone, s.sintering_kw, p, g),
        Technology::Pavers => paver_process(zone, s.pavers, p, g),
        Technology::Gravel => gravel_process(s.gravel, p, g),
        Technology::Polymer => polymer_process(zone, s.polymer, p, g),
    }
}

/// Phase results in schedule order: grade, compact, inner pad, outer pad.
pub fn case_phases(case: Case, s: &ScaleSet, p: &ParameterSet, g: &PadGeometry) -> Vec<ProcessResult> {
    vec![
        grade_scaled(Zone::Inner, s.site_prep, p, g),
        grade_scaled(Zone::Outer, s.site_prep, p, g),
        compact_scaled(Zone::Inner, s.site_prep, p, g),
        compact_scaled(Zone::Outer, s.site_prep, p, g),
        technology_process(case.inner(), Zone::Inner, s, p, g),
        technology_process(case.outer(), Zone::Outer, s, p, g),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedPlan {
    pub case: Case,
    pub phases: Vec<ProcessResult>,
    pub time_days: f64,
    pub energy_mwh: f64,
    /// Deduplicated attachments plus the shared rover fleet.
    pub hardware_mass_kg: f64,
    pub consumable_mass_kg: f64,
    pub fleet_rovers: u32,
    pub rover_unit_mass_kg: f64,
    pub peak_power_kw: f64,
    pub attachments: BTreeMap<Equipment, f64>,
    pub subsystem_hours: Vec<HoursRow>,
}

impl CombinedPlan {
    pub fn mass_from_earth_kg(&self) -> f64 {
        self.hardware_mass_kg + self.consumable_mass_kg
    }

    pub fn rover_mass_kg(&self) -> f64 {
        self.fleet_rovers as f64 * self.rover_unit_mass_kg
    }
}

/// Serial composition of phases with shared equipment and rovers counted once.
pub fn combine_case(case: Case, phases: Vec<ProcessResult>) -> Result<CombinedPlan, ModelError> {
    if let Some(first) = phases.first() {
        if phases.iter().any(|r| r.fingerprint != first.fingerprint) {
            return Err(ModelError::MismatchedParameters);
        }
    }
    let mut attachments: BTreeMap<Equipment, f64> = BTreeMap::new();
    let mut hours: BTreeMap<(Subsystem, crate::params::Zone), f64> = BTreeMap::new();
    let mut time = 0.0;
    let mut energy = 0.0;
    let mut consumables = 0.0;
    let mut fleet = 0;
    let mut peak: f64 = 0.0;
    let mut rover_unit: f64 = 0.0;
    for r in &phases {
        time += r.time_days;
        energy += r.energy_mwh;
        consumables += r.consumable_mass_kg;
        fleet = fleet.max(r.rover_count);
        peak = peak.max(r.peak_power_kw);
        rover_unit = rover_unit.max(r.rover_unit_mass_kg);
        for a in &r.attachments {
            let e = attachments.entry(a.equipment).or_insert(0.0);
            *e = e.max(a.mass_kg);
        }
        for (&s, &h) in &r.subsystem_hours {
            *hours.entry((s, r.zone)).or_insert(0.0) += h;
        }
    }
    let hardware = attachments.values().sum::<f64>() + fleet as f64 * rover_unit;
    Ok(CombinedPlan {
        case,
        phases,
        time_days: time,
        energy_mwh: energy,
        hardware_mass_kg: hardware,
        consumable_mass_kg: consumables,
        fleet_rovers: fleet,
        rover_unit_mass_kg: rover_unit,
        peak_power_kw: peak,
        attachments,
        subsystem_hours: hours
            .into_iter()
            .map(|((subsystem, zone), hours)| HoursRow { subsystem, zone, hours })
            .collect(),
    })
}

pub fn build_plan(case: Case, s: &ScaleSet, p: &ParameterSet, g: &PadGeometry) -> CombinedPlan {
    combine_case(case, case_phases(case, s, p, g)).expect("phases share one parameter set")
}

/// Economic inputs in internal units ($M, years, fractions).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconomicScenario {
    /// $M/kg
    pub transport_cost: f64,
    pub value_multiple: f64,
    pub mitigation_fraction: f64,
    pub duty_cycle: f64,
    pub discount_rate: f64,
    /// $M
    pub program_budget: f64,
    pub program_duration_yr: f64,
    /// $M/yr
    pub ops_cost_per_yr: f64,
    /// $M/kg
    pub dev_cost_rate: f64,
    /// kg/W
    pub solar_mass_to_power: f64,
    pub solar_lifespan_yr: f64,
    pub dev_cost_charging: DevCostCharging,
}

impl EconomicScenario {
    pub fn from_params(p: &ParameterSet) -> Self {
        Self {
            transport_cost: p.transport_cost,
            value_multiple: p.value_multiple,
            mitigation_fraction: p.mitigation_fraction,
            duty_cycle: p.duty_cycle,
            discount_rate: p.discount_rate,
            program_budget: p.program_budget,
            program_duration_yr: p.program_duration_yr,
            ops_cost_per_yr: p.pad_ops_cost_per_yr,
            dev_cost_rate: p.dev_cost_rate,
            solar_mass_to_power: p.solar_mass_to_power,
            solar_lifespan_yr: p.solar_lifespan_yr,
            dev_cost_charging: p.dev_cost_charging,
        }
    }
}

/// Present value of `total` paid in equal parts at the start of each of
/// `years` years.
pub fn present_value_annuity(total: f64, years: u32, rate: f64) -> f64 {
    let payment = total / years as f64;
    (0..years).map(|k| payment / (1.0 + rate).powi(k as i32)).sum()
}

/// Capital recovery factor: level payment per unit present value over `years`.
pub fn capital_recovery_factor(rate: f64, years: f64) -> f64 {
    if rate == 0.0 {
        1.0 / years
    } else {
        rate / (1.0 - (1.0 + rate).powf(-years))
    }
}

fn program_years(s: &EconomicScenario) -> u32 {
    s.program_duration_yr.round().max(1.0) as u32
}

/// Program delay cost in $M for `days` working days of construction.
pub fn program_delay_cost(days: f64, s: &EconomicScenario) -> f64 {
    let pv = present_value_annuity(s.program_budget, program_years(s), s.discount_rate);
    let delay_yr = days / s.duty_cycle / DAYS_PER_YEAR;
    (1.0 - s.mitigation_fraction) * s.value_multiple * pv * s.discount_rate * delay_yr
}

/// Energy cost rate in $K/MWh.
pub fn energy_cost_rate(s: &EconomicScenario) -> f64 {
    // $M per kW of installed solar capacity.
    let capital_per_kw = s.solar_mass_to_power * 1e3 * (s.dev_cost_rate + s.transport_cost);
    let annual_per_kw = capital_per_kw * capital_recovery_factor(s.discount_rate, s.solar_lifespan_yr);
    // $M/kWh → $K/MWh is a factor of 1e6.
    annual_per_kw / HOURS_PER_YEAR * 1e6
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub transport: f64,
    pub development: f64,
    pub delay: f64,
    pub energy: f64,
    pub operations: f64,
    pub total: f64,
    pub appropriated: f64,
    pub reliability_factor: f64,
}

pub fn cost_breakdown(plan: &CombinedPlan, s: &EconomicScenario, reliability_factor: f64) -> CostBreakdown {
    let transport = plan.mass_from_earth_kg() * s.transport_cost;
    let dev_full = plan.hardware_mass_kg * s.dev_cost_rate * reliability_factor;
    let development = match s.dev_cost_charging {
        DevCostCharging::Full => dev_full,
        DevCostCharging::Amortized => {
            dev_full * capital_recovery_factor(s.discount_rate, s.solar_lifespan_yr) * plan.time_days / DAYS_PER_YEAR
        }
        DevCostCharging::Excluded => 0.0,
    };
    let delay = program_delay_cost(plan.time_days, s);
    let energy = plan.energy_mwh * energy_cost_rate(s) / 1e3;
    let operations = s.ops_cost_per_yr * plan.time_days / DAYS_PER_YEAR;
    let total = transport + development + delay + energy + operations;
    CostBreakdown {
        transport,
        development,
        delay,
        energy,
        operations,
        total,
        appropriated: transport + development + operations,
        reliability_factor,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_geometry;

    fn base() -> EconomicScenario {
        EconomicScenario::from_params(&ParameterSet::default())
    }

    #[test]
    fn pv_examples() {
        assert!((present_value_annuity(160.0, 20, 0.035) - 117.68).abs() < 0.01);
        assert!((present_value_annuity(160.0, 20, 0.0) - 160.0).abs() < 1e-9);
        assert_eq!(present_value_annuity(8.0, 1, 0.035), 8.0);
    }

    #[test]
    fn delay_examples() {
        let s = base();
        assert!((program_delay_cost(40.85, &s) - 576.0).abs() < 5.76);
        assert!((program_delay_cost(5.45, &s) - 77.0).abs() < 1.54);
        assert_eq!(program_delay_cost(0.0, &s), 0.0);
    }

    #[test]
    fn energy_rate_examples() {
        let mut s = base();
        assert!((energy_cost_rate(&s) / 473.0 - 1.0).abs() < 0.03);
        s.transport_cost = 1.0;
        assert!((energy_cost_rate(&s) / 645.0 - 1.0).abs() < 0.05);
        s.transport_cost = 0.0;
        s.dev_cost_rate = 0.0;
        assert_eq!(energy_cost_rate(&s), 0.0);
    }

    #[test]
    fn case_parsing() {
        assert_eq!("sipo".parse::<Case>().unwrap(), Case::SiPo);
        assert!("XxYy".parse::<Case>().is_err());
        assert_eq!(Case::SiSi.knobs(), vec![Knob::SitePrep, Knob::Sintering]);
        assert_eq!(Case::PaGr.knobs(), vec![Knob::SitePrep, Knob::Pavers, Knob::Gravel]);
    }

    #[test]
    fn nominal_combinations() {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        let s = ScaleSet::nominal(&p);
        let sipo = build_plan(Case::SiPo, &s, &p, &g);
        assert!((sipo.time_days - 5.45).abs() < 0.05, "{}", sipo.time_days);
        let sisi = build_plan(Case::SiSi, &s, &p, &g);
        assert!((sisi.attachments[&Equipment::Magnetrons] - 3466.7).abs() < 0.1);
        assert_eq!(sisi.fleet_rovers, 4);
        assert!((sisi.hardware_mass_kg - (3466.67 + 300.0 + 200.0 + 1200.0)).abs() < 0.1);
    }

    #[test]
    fn mismatched_parameters_rejected() {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        let mut q = p.clone();
        q.rover_mass = 250.0;
        let s = ScaleSet::nominal(&p);
        let mut phases = case_phases(Case::SiSi, &s, &p, &g);
        phases[5] = sinter_zone(Zone::Outer, 200.0, &q, &g);
        assert!(matches!(
            combine_case(Case::SiSi, phases),
            Err(ModelError::MismatchedParameters)
        ));
    }

    #[test]
    fn zero_plan_costs_nothing() {
        let plan = CombinedPlan {
            case: Case::SiSi,
            phases: vec![],
            time_days: 0.0,
            energy_mwh: 0.0,
            hardware_mass_kg: 0.0,
            consumable_mass_kg: 0.0,
            fleet_rovers: 0,
            rover_unit_mass_kg: 300.0,
            peak_power_kw: 0.0,
            attachments: BTreeMap::new(),
            subsystem_hours: vec![],
        };
        let c = cost_breakdown(&plan, &base(), 1.3);
        assert_eq!(c.total, 0.0);
        assert_eq!(c.appropriated, 0.0);
        let mut only = plan.clone();
        only.consumable_mass_kg = 7200.0;
        let c = cost_breakdown(&only, &base(), 1.3);
        assert_eq!(c.development, 0.0);
        assert!(c.transport > 0.0);
    }
}
