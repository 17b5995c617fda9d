//! Flat report rows and their CSV, JSON and aligned-table encodings.
//!
//! Money is in $M rounded to 3 decimals when the row is built, so every
//! encoding carries the same number.

use serde::{Deserialize, Serialize};

use crate::costing::{CombinedPlan, CostBreakdown};
use crate::error::ModelError;
use crate::optimizer::{calendar_days, Optimum};
use crate::process::ProcessResult;
use crate::reliability::AllocationReport;
use crate::sintering::SinterSimResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Table,
}

/// A row with a fixed column order.
pub trait Tabular: Serialize {
    fn header() -> Vec<&'static str>;
    fn fields(&self) -> Vec<String>;
}

pub fn money(x: f64) -> f64 {
    let r = (x * 1000.0).round() / 1000.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn cash(x: f64) -> String {
    format!("{x:.3}")
}

/// One case at one scale with its cost streams.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub case: String,
    pub feasible: bool,
    pub transport_cost_k_per_kg: f64,
    pub scale_site_prep: f64,
    pub scale_sintering_kw: f64,
    pub scale_pavers: f64,
    pub scale_gravel: f64,
    pub scale_polymer: f64,
    pub time_days: f64,
    pub calendar_days: f64,
    pub energy_mwh: f64,
    pub mass_from_earth_t: f64,
    pub hardware_t: f64,
    pub consumable_t: f64,
    pub rover_count: u32,
    pub peak_power_kw: f64,
    pub reliability_factor: f64,
    pub transport_m: f64,
    pub development_m: f64,
    pub delay_m: f64,
    pub energy_m: f64,
    pub operations_m: f64,
    pub total_m: f64,
    pub appropriated_m: f64,
}

impl ReportRow {
    pub fn new(
        plan: &CombinedPlan,
        cost: &CostBreakdown,
        scales: &crate::costing::ScaleSet,
        feasible: bool,
        transport_cost_k_per_kg: f64,
        duty_cycle: f64,
    ) -> Self {
        Self {
            case: plan.case.as_str().to_string(),
            feasible,
            transport_cost_k_per_kg,
            scale_site_prep: scales.site_prep,
            scale_sintering_kw: scales.sintering_kw,
            scale_pavers: scales.pavers,
            scale_gravel: scales.gravel,
            scale_polymer: scales.polymer,
            time_days: plan.time_days,
            calendar_days: calendar_days(plan, duty_cycle),
            energy_mwh: plan.energy_mwh,
            mass_from_earth_t: plan.mass_from_earth_kg() / 1000.0,
            hardware_t: plan.hardware_mass_kg / 1000.0,
            consumable_t: plan.consumable_mass_kg / 1000.0,
            rover_count: plan.fleet_rovers,
            peak_power_kw: plan.peak_power_kw,
            reliability_factor: cost.reliability_factor,
            transport_m: money(cost.transport),
            development_m: money(cost.development),
            delay_m: money(cost.delay),
            energy_m: money(cost.energy),
            operations_m: money(cost.operations),
            total_m: money(cost.total),
            appropriated_m: money(cost.appropriated),
        }
    }

    pub fn from_optimum(o: &Optimum, transport_cost_k_per_kg: f64, duty_cycle: f64) -> Self {
        Self::new(
            &o.plan,
            &o.cost,
            &o.scales,
            o.feasible,
            transport_cost_k_per_kg,
            duty_cycle,
        )
    }
}

impl Tabular for ReportRow {
    fn header() -> Vec<&'static str> {
        vec![
            "case",
            "feasible",
            "transport_cost_k_per_kg",
            "scale_site_prep",
            "scale_sintering_kw",
            "scale_pavers",
            "scale_gravel",
            "scale_polymer",
            "time_days",
            "calendar_days",
            "energy_mwh",
            "mass_from_earth_t",
            "hardware_t",
            "consumable_t",
            "rover_count",
            "peak_power_kw",
            "reliability_factor",
            "transport_m",
            "development_m",
            "delay_m",
            "energy_m",
            "operations_m",
            "total_m",
            "appropriated_m",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.case.clone(),
            self.feasible.to_string(),
            num(self.transport_cost_k_per_kg),
            num(self.scale_site_prep),
            num(self.scale_sintering_kw),
            num(self.scale_pavers),
            num(self.scale_gravel),
            num(self.scale_polymer),
            num(self.time_days),
            num(self.calendar_days),
            num(self.energy_mwh),
            num(self.mass_from_earth_t),
            num(self.hardware_t),
            num(self.consumable_t),
            self.rover_count.to_string(),
            num(self.peak_power_kw),
            num(self.reliability_factor),
            cash(self.transport_m),
            cash(self.development_m),
            cash(self.delay_m),
            cash(self.energy_m),
            cash(self.operations_m),
            cash(self.total_m),
            cash(self.appropriated_m),
        ]
    }
}

/// Report row tagged with the swept parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    #[serde(flatten)]
    pub row: ReportRow,
}

impl Tabular for SweepRow {
    fn header() -> Vec<&'static str> {
        let mut h = vec!["param", "value"];
        h.extend(ReportRow::header());
        h
    }

    fn fields(&self) -> Vec<String> {
        let mut f = vec![self.param.clone(), num(self.value)];
        f.extend(self.row.fields());
        f
    }
}

/// One process phase, shaped like the process table rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub case: String,
    pub process: String,
    pub zone: String,
    pub scale: Option<f64>,
    pub time_days: f64,
    pub energy_mwh: f64,
    pub hardware_t: f64,
    pub consumable_t: f64,
    pub rover_count: u32,
    pub peak_power_kw: f64,
}

impl PhaseRow {
    pub fn from_phase(case: &str, r: &ProcessResult) -> Self {
        Self {
            case: case.to_string(),
            process: r.process.as_str().to_string(),
            zone: r.zone.as_str().to_string(),
            scale: Some(r.scale),
            time_days: r.time_days,
            energy_mwh: r.energy_mwh,
            hardware_t: r.hardware_mass_kg / 1000.0,
            consumable_t: r.consumable_mass_kg / 1000.0,
            rover_count: r.rover_count,
            peak_power_kw: r.peak_power_kw,
        }
    }

    /// Combined row for the whole case.
    pub fn total(plan: &CombinedPlan) -> Self {
        Self {
            case: plan.case.as_str().to_string(),
            process: "total".into(),
            zone: "both".into(),
            scale: None,
            time_days: plan.time_days,
            energy_mwh: plan.energy_mwh,
            hardware_t: plan.hardware_mass_kg / 1000.0,
            consumable_t: plan.consumable_mass_kg / 1000.0,
            rover_count: plan.fleet_rovers,
            peak_power_kw: plan.peak_power_kw,
        }
    }
}

impl Tabular for PhaseRow {
    fn header() -> Vec<&'static str> {
        vec![
            "case",
            "process",
            "zone",
            "scale",
            "time_days",
            "energy_mwh",
            "hardware_t",
            "consumable_t",
            "rover_count",
            "peak_power_kw",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.case.clone(),
            self.process.clone(),
            self.zone.clone(),
            self.scale.map(num).unwrap_or_default(),
            num(self.time_days),
            num(self.energy_mwh),
            num(self.hardware_t),
            num(self.consumable_t),
            self.rover_count.to_string(),
            num(self.peak_power_kw),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinterRow {
    pub flux_kw_m2: f64,
    pub depth_cm: f64,
    pub elapsed_min: f64,
    pub energy_kwh_per_m2: f64,
    pub steps: usize,
    pub dt_s: f64,
    pub dz_m: f64,
    pub max_temperature_c: f64,
    pub max_balance_error: f64,
}

impl SinterRow {
    pub fn new(flux_kw_m2: f64, depth_cm: f64, r: &SinterSimResult) -> Self {
        Self {
            flux_kw_m2,
            depth_cm,
            elapsed_min: r.elapsed_s / 60.0,
            energy_kwh_per_m2: r.energy_kwh_per_m2,
            steps: r.steps,
            dt_s: r.dt_s,
            dz_m: r.dz_m,
            max_temperature_c: r.max_temperature_c,
            max_balance_error: r.max_balance_error,
        }
    }
}

impl Tabular for SinterRow {
    fn header() -> Vec<&'static str> {
        vec![
            "flux_kw_m2",
            "depth_cm",
            "elapsed_min",
            "energy_kwh_per_m2",
            "steps",
            "dt_s",
            "dz_m",
            "max_temperature_c",
            "max_balance_error",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            num(self.flux_kw_m2),
            num(self.depth_cm),
            num(self.elapsed_min),
            num(self.energy_kwh_per_m2),
            self.steps.to_string(),
            num(self.dt_s),
            num(self.dz_m),
            num(self.max_temperature_c),
            num(self.max_balance_error),
        ]
    }
}

/// One allocation group, or the whole system when `group` is `overall`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityRow {
    pub system: String,
    pub group: String,
    pub lambda: f64,
    pub baseline: f64,
    pub goal: f64,
    pub cost_factor: f64,
    pub mass_fraction: f64,
}

pub fn reliability_rows(reports: &[AllocationReport]) -> Vec<ReliabilityRow> {
    let mut out = Vec::new();
    for r in reports {
        for g in &r.groups {
            out.push(ReliabilityRow {
                system: r.system.clone(),
                group: g.group.as_str().to_string(),
                lambda: g.lambda,
                baseline: g.baseline,
                goal: g.goal,
                cost_factor: g.cost_factor,
                mass_fraction: g.mass_fraction,
            });
        }
        out.push(ReliabilityRow {
            system: r.system.clone(),
            group: "overall".into(),
            lambda: r.total_lambda,
            baseline: r.baseline,
            goal: r.goal,
            cost_factor: r.cost_factor,
            mass_fraction: r.groups.iter().map(|g| g.mass_fraction).sum(),
        });
    }
    out
}

impl Tabular for ReliabilityRow {
    fn header() -> Vec<&'static str> {
        vec![
            "system",
            "group",
            "lambda",
            "baseline",
            "goal",
            "cost_factor",
            "mass_fraction",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.system.clone(),
            self.group.clone(),
            num(self.lambda),
            num(self.baseline),
            num(self.goal),
            num(self.cost_factor),
            num(self.mass_fraction),
        ]
    }
}

pub fn to_csv<T: Tabular>(rows: &[T]) -> Result<String, ModelError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(T::header())?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    let bytes = w.into_inner().map_err(|e| ModelError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json<T: Tabular>(rows: &[T]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn to_table<T: Tabular>(rows: &[T]) -> String {
    let header: Vec<String> = T::header().into_iter().map(String::from).collect();
    let body: Vec<Vec<String>> = rows.iter().map(|r| r.fields()).collect();
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in &body {
        for (w, f) in width.iter_mut().zip(r) {
            *w = (*w).max(f.len());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&header);
    for r in &body {
        out += &line(r);
    }
    out
}

pub fn render<T: Tabular>(rows: &[T], format: Format) -> Result<String, ModelError> {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => Ok(to_json(rows)),
        Format::Table => Ok(to_table(rows)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn money_rounding() {
        assert_eq!(money(1.23449), 1.234);
        assert_eq!(money(-0.0001), 0.0);
        assert_eq!(cash(money(2.5)), "2.500");
    }

    #[test]
    fn csv_quotes_commas() {
        let rows = vec![ReliabilityRow {
            system: "a,b".into(),
            group: "g".into(),
            lambda: 1.0,
            baseline: 0.5,
            goal: 0.9,
            cost_factor: 1.25,
            mass_fraction: 1.0,
        }];
        let s = to_csv(&rows).unwrap();
        assert!(s.lines().nth(1).unwrap().starts_with("\"a,b\",g,1,0.5"));
        assert_eq!(to_table(&rows).lines().count(), 2);
    }
}
