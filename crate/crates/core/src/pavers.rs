//! Oven-baked pavers: excavation, feedstock hauling, baking in batches,
//! paver hauling and installation, and grouting of the inner pad.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::params::{PadGeometry, ParameterSet, Zone};
use crate::process::{Attachment, Equipment, Process, ProcessResult, Subsystem};
use crate::siteprep::{compact, grade, roving_energy};

/// Feedstock haul distance per square root of excavated area.
const FEEDSTOCK_HAUL_COEFF: f64 = 0.593;
/// Heating time in exponential time constants.
const HEATING_TIME_CONSTANTS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BakeTime {
    pub heat_s: f64,
    pub cool_s: f64,
}

impl BakeTime {
    pub fn total_s(&self) -> f64 {
        self.heat_s + self.cool_s
    }
}

/// Conduction-limited heating of a mold of `thickness` heated from both faces.
pub fn bake_time_per_batch(thickness: f64, p: &ParameterSet) -> BakeTime {
    let half = thickness / 2.0;
    let heat =
        HEATING_TIME_CONSTANTS * half * half * p.compacted_density * p.mold_specific_heat / (2.0 * p.mold_conductivity);
    BakeTime {
        heat_s: heat,
        cool_s: heat * p.cooling_factor,
    }
}

/// Grout mass (kg) and insertion time (s) for the joints between `count` pavers.
pub fn grout_requirements(count: u64, p: &ParameterSet) -> (f64, f64) {
    let length = 4.0 * p.paver_size * count as f64 / 2.0;
    let mass = length * std::f64::consts::PI * p.grout_bead_radius.powi(2) * p.grout_density;
    (mass, length / p.grout_rate)
}

/// Stream totals feeding the batch pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaverStreams {
    /// Excavation plus feedstock hauling.
    pub excavate_haul_s: f64,
    /// Baking of all batches.
    pub bake_s: f64,
    /// Grading and compacting plus paver hauling and installation.
    pub prep_install_s: f64,
    /// Paver hauling and installation.
    pub install_s: f64,
}

/// Pipelined total time over `n` batches:
/// (n−1)/n · max(E+FH, B, GC+PHI) + (E+FH + B + PHI)/n, all as totals.
pub fn paver_total_time(s: &PaverStreams, n: u64) -> f64 {
    let n = n.max(1) as f64;
    let long_pole = s.excavate_haul_s.max(s.bake_s).max(s.prep_install_s);
    (n - 1.0) / n * long_pole + (s.excavate_haul_s + s.bake_s + s.install_s) / n
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaverPlan {
    pub zone: Zone,
    pub paver_count: u64,
    pub paver_mass_kg: f64,
    pub batch_size: u64,
    pub batch_count: u64,
    pub heat_time_s: f64,
    pub cool_time_s: f64,
    pub bake_time_s: f64,
    pub excavation_time_s: f64,
    pub feedstock_haul_time_s: f64,
    pub paver_haul_time_s: f64,
    pub install_time_s: f64,
    pub grout_mass_kg: f64,
    pub grout_time_s: f64,
    pub feedstock_trips: u64,
    pub feedstock_haul_distance_m: f64,
    pub paver_trips: u64,
    pub paver_haul_distance_m: f64,
    pub streams: PaverStreams,
    /// Pipeline time of one production line, grout excluded.
    pub pipeline_time_s: f64,
}

/// Oven mold capacity in pavers. Sized by the heaviest (inner) paver so one
/// oven serves both zones.
pub fn batch_size(p: &ParameterSet, g: &PadGeometry) -> u64 {
    ((p.max_paver_load / g.inner_paver_mass).floor() as u64).max(1)
}

pub fn paver_plan(zone: Zone, p: &ParameterSet, g: &PadGeometry) -> PaverPlan {
    let count = g.paver_count(zone);
    let unit = g.paver_mass(zone);
    let total_mass = count as f64 * unit;
    let thickness = match zone {
        Zone::Inner => p.inner_paver_thickness,
        Zone::Outer => p.outer_paver_thickness,
    };
    let bs = batch_size(p, g);
    let n = count.div_ceil(bs);
    let bake = bake_time_per_batch(thickness, p);
    let bake_total = n as f64 * bake.total_s();

    let excavation = total_mass / p.excavation_rate;
    let excavated_area = total_mass / p.loose_soil_density / p.bite_depth;
    let feed_dist = FEEDSTOCK_HAUL_COEFF * excavated_area.sqrt();
    let feed_trips = trips(total_mass, p.feedstock_load);
    let feed_haul = feed_trips as f64 * 2.0 * feed_dist / p.driving_speed;

    let haul_dist = g.oven_distance(zone);
    let paver_trips = trips(total_mass, p.max_paver_load);
    let paver_haul = paver_trips as f64 * 2.0 * haul_dist / p.driving_speed;
    let install = count as f64 * p.paver_install_time;

    let prep = (grade(zone, p, g).time_days + compact(zone, p, g).time_days) * 86_400.0;
    let streams = PaverStreams {
        excavate_haul_s: excavation + feed_haul,
        bake_s: bake_total,
        prep_install_s: prep + paver_haul + install,
        install_s: paver_haul + install,
    };
    let (grout_mass, grout_time) = match zone {
        Zone::Inner => grout_requirements(count, p),
        Zone::Outer => (0.0, 0.0),
    };
    PaverPlan {
        zone,
        paver_count: count,
        paver_mass_kg: unit,
        batch_size: bs,
        batch_count: n,
        heat_time_s: bake.heat_s,
        cool_time_s: bake.cool_s,
        bake_time_s: bake_total,
        excavation_time_s: excavation,
        feedstock_haul_time_s: feed_haul,
        paver_haul_time_s: paver_haul,
        install_time_s: install,
        grout_mass_kg: grout_mass,
        grout_time_s: grout_time,
        feedstock_trips: feed_trips,
        feedstock_haul_distance_m: feed_dist,
        paver_trips,
        paver_haul_distance_m: haul_dist,
        streams,
        pipeline_time_s: paver_total_time(&streams, n),
    }
}

fn trips(mass: f64, load: f64) -> u64 {
    (mass / load - 1e-9).ceil().max(0.0) as u64
}

/// Baking energy in J for a mass of pavers.
pub fn baking_energy(mass: f64, p: &ParameterSet) -> f64 {
    mass * p.mold_specific_heat * (p.sinter_temperature_c - p.start_temperature_c) / p.oven_efficiency
}

/// Paver process with `scale` parallel production lines (oven, excavator,
/// installer and two rovers per line).
pub fn paver_process(zone: Zone, scale: f64, p: &ParameterSet, g: &PadGeometry) -> ProcessResult {
    let plan = paver_plan(zone, p, g);
    paver_process_from_plan(&plan, scale, p)
}

pub fn paver_process_from_plan(plan: &PaverPlan, scale: f64, p: &ParameterSet) -> ProcessResult {
    let total_mass = plan.paver_count as f64 * plan.paver_mass_kg;
    let time = (plan.pipeline_time_s + plan.grout_time_s) / scale;

    let feed_loaded = p.rover_mass + p.excavator_mass + p.feedstock_load;
    let feed_empty = p.rover_mass + p.excavator_mass;
    let haul_loaded = p.rover_mass + p.install_arm_mass + p.max_paver_load;
    let haul_empty = p.rover_mass + p.install_arm_mass;
    let roving = roving_energy(
        feed_loaded + feed_empty,
        plan.feedstock_trips as f64 * plan.feedstock_haul_distance_m,
        p,
    ) + roving_energy(
        haul_loaded + haul_empty,
        plan.paver_trips as f64 * plan.paver_haul_distance_m,
        p,
    );
    let energy = baking_energy(total_mass, p)
        + p.excavator_power * plan.excavation_time_s
        + p.install_power * (plan.install_time_s + plan.grout_time_s)
        + roving;

    let batch_mass = plan.batch_size as f64 * plan.paver_mass_kg;
    let oven_power = if plan.heat_time_s > 0.0 {
        baking_energy(batch_mass, p) / (plan.heat_time_s + plan.cool_time_s)
    } else {
        0.0
    };
    let peak = (oven_power + p.excavator_power + p.install_power) * scale;

    let h = |s: f64| s / scale / 3600.0;
    let mut hours = BTreeMap::new();
    hours.insert(Subsystem::Excavating, h(plan.excavation_time_s));
    hours.insert(
        Subsystem::Hauling,
        h(plan.feedstock_haul_time_s + plan.paver_haul_time_s),
    );
    hours.insert(
        Subsystem::OvenRobotics,
        h(plan.paver_count as f64 * (p.mold_fill_time + p.oven_transfer_time)),
    );
    hours.insert(Subsystem::Baking, h(plan.bake_time_s));
    hours.insert(Subsystem::LayingPavers, h(plan.install_time_s));
    if plan.zone == Zone::Inner {
        hours.insert(Subsystem::Grouting, h(plan.grout_time_s));
    }

    let rovers = (2.0 * scale - 1e-9).ceil().max(1.0) as u32;
    ProcessResult::assemble(
        Process::Pavers,
        plan.zone,
        scale,
        time,
        energy,
        vec![
            Attachment {
                equipment: Equipment::Oven,
                mass_kg: p.oven_mass * scale,
            },
            Attachment {
                equipment: Equipment::InstallArm,
                mass_kg: p.install_arm_mass * scale,
            },
            Attachment {
                equipment: Equipment::Excavator,
                mass_kg: p.excavator_mass * scale,
            },
        ],
        plan.grout_mass_kg,
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

    #[test]
    fn heat_times() {
        let p = ParameterSet::default();
        let i = bake_time_per_batch(0.0762, &p);
        assert!((i.heat_s - 30_240.0).abs() < 5.0, "{}", i.heat_s);
        let o = bake_time_per_batch(0.0254, &p);
        assert!((o.heat_s - 3360.0).abs() < 1.0);
        let d = bake_time_per_batch(0.1524, &p);
        assert!((d.heat_s / i.heat_s - 4.0).abs() < 1e-12);
        assert!((i.cool_s - 0.5 * i.heat_s).abs() < 1e-9);
    }

    #[test]
    fn pipeline_examples() {
        let s = PaverStreams {
            excavate_haul_s: 4.0,
            bake_s: 10.0,
            prep_install_s: 3.0,
            install_s: 2.0,
        };
        assert!((paver_total_time(&s, 2) - 13.0).abs() < 1e-12);
        assert!((paver_total_time(&s, 1) - 16.0).abs() < 1e-12);
        let big = paver_total_time(&s, 1_000_000);
        assert!((big - 10.0).abs() < 1e-4);
    }

    #[test]
    fn grout_inner() {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        let (m, t) = grout_requirements(g.inner_paver_count, &p);
        assert!((m - 84.0).abs() < 0.5, "{m}");
        assert!((t / 3600.0 - 55.0).abs() < 0.5);
        let mut p0 = p.clone();
        p0.grout_bead_radius = 0.0;
        assert_eq!(grout_requirements(g.inner_paver_count, &p0).0, 0.0);
    }

    #[test]
    fn inner_plan() {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        let plan = paver_plan(Zone::Inner, &p, &g);
        assert_eq!(plan.batch_size, 28);
        assert_eq!(plan.batch_count, 78);
        let r = paver_process(Zone::Inner, 1.0, &p, &g);
        assert!((r.energy_mwh - 41.35).abs() < 0.1, "{}", r.energy_mwh);
        assert!((r.time_days - 43.27).abs() < 0.1, "{}", r.time_days);
        assert!((r.consumable_mass_kg - 84.0).abs() < 0.5);
        assert_eq!(r.rover_count, 2);
    }
}
