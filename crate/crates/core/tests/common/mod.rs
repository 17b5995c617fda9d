#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use padtrade::params::Zone;
use padtrade::process::Subsystem;
use padtrade::reliability::HoursRow;
use serde::Deserialize;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

#[derive(Deserialize)]
struct HoursRecord {
    system: String,
    subsystem: String,
    zone: Zone,
    hours: f64,
}

/// Published operating hours per system, in file order.
pub fn published_hours() -> Vec<(String, Vec<HoursRow>)> {
    let mut rdr = csv::Reader::from_path(fixture("published_hours.csv")).unwrap();
    let mut out: Vec<(String, Vec<HoursRow>)> = Vec::new();
    for rec in rdr.deserialize::<HoursRecord>() {
        let rec = rec.unwrap();
        let row = HoursRow {
            subsystem: Subsystem::parse(&rec.subsystem).unwrap(),
            zone: rec.zone,
            hours: rec.hours,
        };
        match out.iter_mut().find(|(s, _)| *s == rec.system) {
            Some((_, rows)) => rows.push(row),
            None => out.push((rec.system, vec![row])),
        }
    }
    out
}

#[derive(Debug, Deserialize)]
pub struct GroupRecord {
    pub system: String,
    pub group: String,
    pub baseline_pct: f64,
    pub goal_pct: f64,
    pub cost_factor: f64,
}

pub fn published_groups() -> Vec<GroupRecord> {
    let mut rdr = csv::Reader::from_path(fixture("published_groups.csv")).unwrap();
    rdr.deserialize().map(|r| r.unwrap()).collect()
}

/// System cost factors, keyed by system.
pub fn published_system_factors() -> BTreeMap<String, f64> {
    #[derive(Deserialize)]
    struct Rec {
        system: String,
        cost_factor: f64,
    }
    let mut rdr = csv::Reader::from_path(fixture("published_system_factors.csv")).unwrap();
    rdr.deserialize::<Rec>()
        .map(|r| r.unwrap())
        .map(|r| (r.system, r.cost_factor))
        .collect()
}
