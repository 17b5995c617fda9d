//! Grading and compacting, plus the roving energy used by every process.

use std::collections::BTreeMap;

use crate::params::{PadGeometry, ParameterSet, Zone};
use crate::process::{units_for, Attachment, Equipment, Process, ProcessResult, Subsystem};

/// Energy in J to drive `load_mass` kg over `distance` m.
pub fn roving_energy(load_mass: f64, distance: f64, p: &ParameterSet) -> f64 {
    p.roving_specific_energy * load_mass * distance
}

pub fn grade(zone: Zone, p: &ParameterSet, g: &PadGeometry) -> ProcessResult {
    grade_scaled(zone, 1.0, p, g)
}

pub fn compact(zone: Zone, p: &ParameterSet, g: &PadGeometry) -> ProcessResult {
    compact_scaled(zone, 1.0, p, g)
}

/// Grading with `scale` graders working in parallel. Fractional scales
/// model a proportionally smaller and slower blade.
pub fn grade_scaled(zone: Zone, scale: f64, p: &ParameterSet, g: &PadGeometry) -> ProcessResult {
    let area = g.area(zone);
    let path = area / p.blade_width;
    let time = area / (p.grading_rate * scale);
    let blade = p.blade_mass * scale;
    let rovers = units_for(scale);
    let carried = p.rover_mass + blade / rovers as f64;
    let energy = p.grading_energy_per_m * path + roving_energy(carried, path, p);
    finish(
        Process::Grading,
        zone,
        scale,
        time,
        energy,
        Equipment::GradingBlade,
        blade,
        rovers,
        p,
    )
}

/// Compacting with `scale` compactors working in parallel.
pub fn compact_scaled(zone: Zone, scale: f64, p: &ParameterSet, g: &PadGeometry) -> ProcessResult {
    let area = g.area(zone);
    let path = area / p.blade_width;
    let time = area / (p.compacting_rate * scale);
    let plate = p.compactor_mass * scale;
    let rovers = units_for(scale);
    let carried = p.rover_mass + plate / rovers as f64;
    let energy = p.compactor_power * scale * time + roving_energy(carried, path, p);
    finish(
        Process::Compacting,
        zone,
        scale,
        time,
        energy,
        Equipment::Compactor,
        plate,
        rovers,
        p,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish(
    process: Process,
    zone: Zone,
    scale: f64,
    time: f64,
    energy: f64,
    equipment: Equipment,
    mass: f64,
    rovers: u32,
    p: &ParameterSet,
) -> ProcessResult {
    // Constant-rate work: average and peak power coincide.
    let peak = if time > 0.0 { energy / time } else { 0.0 };
    let mut hours = BTreeMap::new();
    hours.insert(Subsystem::GradingCompacting, time / 3600.0);
    ProcessResult::assemble(
        process,
        zone,
        scale,
        time,
        energy,
        vec![Attachment {
            equipment,
            mass_kg: mass,
        }],
        0.0,
        rovers,
        peak,
        hours,
        p,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_geometry;

    fn setup() -> (ParameterSet, PadGeometry) {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        (p, g)
    }

    #[test]
    fn roving_energy_examples() {
        let p = ParameterSet::default();
        assert_eq!(roving_energy(0.0, 1234.0, &p), 0.0);
        assert!((roving_energy(300.0, 1000.0, &p) - 750e3).abs() < 1e-6);
        assert_eq!(roving_energy(500.0, 0.0, &p), 0.0);
    }

    #[test]
    fn grading_rows() {
        let (p, g) = setup();
        let r = grade(Zone::Inner, &p, &g);
        assert!((r.time_days - 0.0524).abs() < 5e-4);
        assert!((r.energy_mwh - 0.00516).abs() < 5e-5);
        assert!((r.peak_power_kw - 4.1).abs() < 0.1);
        assert!((r.hardware_mass_kg - 600.0).abs() < 1e-9);
        let r = grade(Zone::Outer, &p, &g);
        assert!((r.time_days - 0.2127).abs() < 5e-4);
    }

    #[test]
    fn compacting_rows() {
        let (p, g) = setup();
        let r = compact(Zone::Inner, &p, &g);
        assert!((r.time_days - 0.1047).abs() < 5e-4);
        assert!((r.energy_mwh - 0.0108).abs() < 2e-4);
        assert!((r.peak_power_kw - 4.30).abs() < 0.02);
        assert!((r.hardware_mass_kg - 500.0).abs() < 1e-9);
    }

    #[test]
    fn zero_area_zone() {
        let p = ParameterSet {
            r_inner: 1e-300,
            ..ParameterSet::default()
        };
        let g = derive_geometry(&p);
        let r = grade(Zone::Inner, &p, &g);
        assert!(r.time_days < 1e-300 && r.energy_mwh < 1e-300);
        let r = compact(Zone::Inner, &p, &g);
        assert!(r.time_days < 1e-300 && r.energy_mwh < 1e-300);
    }
}
