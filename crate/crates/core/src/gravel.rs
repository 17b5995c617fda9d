//! Gravel and rock apron: raking four rock size classes, trommel sorting,
//! rock laying and hauling.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::params::{PadGeometry, ParameterSet, Zone};
use crate::process::{units_for, Attachment, Equipment, Process, ProcessResult, Subsystem};
use crate::siteprep::roving_energy;

const DEFAULT_SOIL_TABLE: &str = include_str!("../data/soil_strength.csv");

/// Rock size classes in m, spaced logarithmically from 1.5 to 15 cm.
pub const ROCK_CLASSES: [f64; 4] = [0.015, 0.0323, 0.0696, 0.15];
/// Tine forces in N at the class raking depths.
pub const ANCHOR_FORCES: [f64; 4] = [8.3, 24.7, 104.0, 667.0];

const DENSITY_ASYMPTOTE: f64 = 1920.0;
const DENSITY_A: f64 = 0.122;
const DENSITY_B: f64 = 0.18;
const MAX_TINE_DEPTH: f64 = 0.25;

/// Apollo bulk density correlation in kg/m³ for depth `z` m.
pub fn regolith_density(z: f64) -> f64 {
    DENSITY_ASYMPTOTE * (z + DENSITY_A) / (z + DENSITY_B)
}

/// Relative density in percent for depth `z` m.
pub fn relative_density(z: f64) -> f64 {
    let surface = DENSITY_A / DENSITY_B;
    ((z + DENSITY_A) / (z + DENSITY_B) - surface) / (1.0 - surface) * 100.0
}

/// Area in m² that must be raked to collect the rock of class diameter `d` m.
pub fn raking_area(d: f64) -> f64 {
    37_772.0 * d.powf(-0.535)
}

/// Raking depth for a rock class, proportional to diameter.
pub fn class_depth(d: f64, p: &ParameterSet) -> f64 {
    p.max_raking_depth * d / ROCK_CLASSES[3]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoilProfile {
    /// (relative density %, friction angle deg, cohesion Pa)
    pub strength: Vec<(f64, f64, f64)>,
    pub gravity: f64,
}

impl Default for SoilProfile {
    fn default() -> Self {
        Self {
            strength: parse_soil_table(DEFAULT_SOIL_TABLE.as_bytes()).expect("shipped table is valid"),
            gravity: 1.622,
        }
    }
}

/// Reads a `relative_density_pct,friction_deg,cohesion_pa` CSV.
pub fn parse_soil_table<R: Read>(r: R) -> Result<Vec<(f64, f64, f64)>, ModelError> {
    #[derive(Deserialize)]
    struct Row {
        relative_density_pct: f64,
        friction_deg: f64,
        cohesion_pa: f64,
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: Row = row?;
        out.push((row.relative_density_pct, row.friction_deg, row.cohesion_pa));
    }
    if out.is_empty() {
        return Err(ModelError::SoilTable("no rows".into()));
    }
    if out.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(ModelError::SoilTable(
            "relative density must be strictly increasing".into(),
        ));
    }
    if out.iter().any(|r| !(0.0..=100.0).contains(&r.0)) {
        return Err(ModelError::SoilTable("relative density must lie in [0, 100]".into()));
    }
    Ok(out)
}

impl SoilProfile {
    pub fn density(&self, z: f64) -> f64 {
        regolith_density(z)
    }

    /// Friction angle in degrees and cohesion in Pa at depth `z`.
    pub fn strength_at(&self, z: f64) -> (f64, f64) {
        let dr = relative_density(z).clamp(0.0, 100.0);
        let t = &self.strength;
        if dr <= t[0].0 {
            return (t[0].1, t[0].2);
        }
        let last = t[t.len() - 1];
        if dr >= last.0 {
            return (last.1, last.2);
        }
        let i = t.partition_point(|r| r.0 <= dr);
        let (a, b) = (t[i - 1], t[i]);
        let w = (dr - a.0) / (b.0 - a.0);
        (a.1 + w * (b.1 - a.1), a.2 + w * (b.2 - a.2))
    }
}

/// Force on one rake tine as a function of depth.
pub trait TineForceModel {
    fn force(&self, depth: f64) -> Result<f64, ModelError>;
}

/// Log-log interpolation through anchor (depth, force) points, extrapolated
/// with the end slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchoredTineForce {
    pub depths: Vec<f64>,
    pub forces: Vec<f64>,
}

impl AnchoredTineForce {
    pub fn from_params(p: &ParameterSet) -> Self {
        Self {
            depths: ROCK_CLASSES.iter().map(|&d| class_depth(d, p)).collect(),
            forces: ANCHOR_FORCES.to_vec(),
        }
    }
}

impl TineForceModel for AnchoredTineForce {
    fn force(&self, depth: f64) -> Result<f64, ModelError> {
        if !(depth > 0.0 && depth <= MAX_TINE_DEPTH) {
            return Err(ModelError::Domain {
                what: "tine depth (m)",
                value: depth,
            });
        }
        let n = self.depths.len();
        let i = self.depths.partition_point(|&d| d <= depth).clamp(1, n - 1);
        let (x0, x1) = (self.depths[i - 1].ln(), self.depths[i].ln());
        let (y0, y1) = (self.forces[i - 1].ln(), self.forces[i].ln());
        let y = y0 + (y1 - y0) * (depth.ln() - x0) / (x1 - x0);
        Ok(y.exp())
    }
}

pub fn tine_force(depth: f64, p: &ParameterSet) -> Result<f64, ModelError> {
    AnchoredTineForce::from_params(p).force(depth)
}

/// Rake power in W at `depth`: the deepest-depth anchor scaled by force ratio.
pub fn raking_power(depth: f64, p: &ParameterSet) -> Result<f64, ModelError> {
    let model = AnchoredTineForce::from_params(p);
    let deepest = model.force(p.max_raking_depth)?;
    Ok(p.rake_power_at_max_depth * model.force(depth)? / deepest)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RockClassPlan {
    pub diameter_m: f64,
    pub depth_m: f64,
    pub tine_force_n: f64,
    pub area_m2: f64,
    pub time_s: f64,
    pub energy_j: f64,
}

pub fn rock_class_plans(p: &ParameterSet) -> Vec<RockClassPlan> {
    ROCK_CLASSES
        .iter()
        .map(|&d| {
            let depth = class_depth(d, p);
            let area = raking_area(d);
            let time = area / p.rake_width / p.raking_speed;
            let power = raking_power(depth, p).expect("class depths lie in the tine domain");
            RockClassPlan {
                diameter_m: d,
                depth_m: depth,
                tine_force_n: tine_force(depth, p).expect("class depths lie in the tine domain"),
                area_m2: area,
                time_s: time,
                energy_j: power * time,
            }
        })
        .collect()
}

/// Gravel apron on the outer zone with `scale` raking and laying crews.
pub fn gravel_process(scale: f64, p: &ParameterSet, g: &PadGeometry) -> ProcessResult {
    let area = g.outer_area;
    let classes = rock_class_plans(p);
    let rake_time: f64 = classes.iter().map(|c| c.time_s).sum();
    let rake_energy: f64 = classes.iter().map(|c| c.energy_j).sum();

    let rock_mass = area * p.rock_pad_thickness * p.packed_rock_density;
    let trommel = p.trommel_energy_per_kg * rock_mass;

    let lay_time = p.rock_lay_time_per_m2 * area;
    let lay_path = area / p.rock_laying_width;
    let lay_energy = roving_energy(p.rock_laying_rover_mass + p.rock_load_per_trip / 2.0, lay_path, p);

    let trips = (rock_mass / p.rock_load_per_trip - 1e-9).ceil().max(0.0);
    let haul_time = trips * p.gravel_haul_round_trip / p.driving_speed;
    let leg = p.gravel_haul_round_trip / 2.0;
    let haul_energy = roving_energy(2.0 * p.rock_laying_rover_mass + p.rock_load_per_trip, trips * leg, p);

    let time = (rake_time + lay_time + haul_time) / scale;
    let energy = rake_energy + trommel + lay_energy + haul_energy;

    let sort_time = rake_time / 2.0;
    let trommel_power = if sort_time > 0.0 { trommel / sort_time } else { 0.0 };
    let haul_power = p.roving_specific_energy * (p.rock_laying_rover_mass + p.rock_load_per_trip) * p.driving_speed;
    let peak = (p.rake_power_at_max_depth + trommel_power).max(haul_power) * scale;

    let h = |s: f64| s / scale / 3600.0;
    let mut hours = BTreeMap::new();
    hours.insert(Subsystem::Raking, h(rake_time));
    hours.insert(Subsystem::Sorting, h(sort_time));
    hours.insert(Subsystem::LayingRock, h(lay_time));
    hours.insert(Subsystem::Hauling, h(haul_time));

    let crews = units_for(scale);
    ProcessResult::assemble(
        Process::Gravel,
        Zone::Outer,
        scale,
        time,
        energy,
        vec![
            Attachment {
                equipment: Equipment::Rake,
                mass_kg: (p.raking_rover_mass - p.rover_mass).max(0.0) * scale,
            },
            Attachment {
                equipment: Equipment::RockLayer,
                mass_kg: (p.rock_laying_rover_mass - p.rover_mass).max(0.0) * scale,
            },
        ],
        0.0,
        2 * crews,
        peak,
        hours,
        p,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_geometry;

    #[test]
    fn density_law() {
        assert!((regolith_density(0.0) - 1301.33).abs() < 0.01);
        assert!(regolith_density(0.1) < regolith_density(0.2));
        assert!((regolith_density(1e9) - 1920.0).abs() < 1e-3);
    }

    #[test]
    fn relative_density_law() {
        assert!(relative_density(0.0).abs() < 1e-12);
        assert!((relative_density(1e12) - 100.0).abs() < 1e-6);
        let z: f64 = 0.1;
        let oracle = ((0.222 / 0.28) - 0.122 / 0.18) / (1.0 - 0.122 / 0.18) * 100.0;
        assert!((relative_density(z) - oracle).abs() < 1e-9);
    }

    #[test]
    fn raking_areas() {
        assert!((raking_area(0.15) / 1.042e5 - 1.0).abs() < 2e-3);
        assert!((raking_area(0.015) / 3.57e5 - 1.0).abs() < 3e-3);
        assert!((raking_area(0.05) / raking_area(0.1) - 2f64.powf(0.535)).abs() < 1e-12);
    }

    #[test]
    fn tine_anchors() {
        let p = ParameterSet::default();
        assert!((tine_force(0.1016, &p).unwrap() - 667.0).abs() < 1e-9);
        assert!((tine_force(class_depth(0.015, &p), &p).unwrap() - 8.3).abs() < 1e-9);
        let mid = tine_force(0.03, &p).unwrap();
        assert!(mid > 24.7 && mid < 104.0);
        assert!(tine_force(0.0, &p).is_err());
        assert!(tine_force(0.3, &p).is_err());
    }

    #[test]
    fn rake_power() {
        let p = ParameterSet::default();
        assert!((raking_power(0.1016, &p).unwrap() - 982.0).abs() < 1e-9);
        let shallow = raking_power(class_depth(0.015, &p), &p).unwrap();
        assert!((shallow - 982.0 * 8.3 / 667.0).abs() < 1e-9);
        let mut p0 = p.clone();
        p0.rake_power_at_max_depth = 0.0;
        assert_eq!(raking_power(0.05, &p0).unwrap(), 0.0);
    }

    #[test]
    fn strength_interpolates() {
        let s = SoilProfile::default();
        let (phi0, c0) = s.strength_at(0.0);
        let (phi1, c1) = s.strength_at(0.5);
        assert!(phi1 > phi0 && c1 > c0);
    }

    #[test]
    fn baseline_row() {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        let r = gravel_process(1.0, &p, &g);
        assert!((r.hardware_mass_kg - 1600.0).abs() < 1e-9);
        assert!((r.time_days - 22.3).abs() < 0.3, "{}", r.time_days);
        assert!(r.energy_mwh > 0.4 && r.energy_mwh < 1.2);
    }
}
