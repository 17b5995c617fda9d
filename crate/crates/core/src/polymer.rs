//! Polymer infusion of the regolith surface.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::params::{PadGeometry, ParameterSet, Zone};
use crate::process::{units_for, Attachment, Equipment, Process, ProcessResult, Subsystem};
use crate::siteprep::roving_energy;

/// Polymer mass fraction when polymer fills all pore space of compacted soil.
pub fn polymer_mass_fraction_pore_filling(bulk: f64, grain: f64, polymer: f64) -> Result<f64, ModelError> {
    if !(bulk > 0.0) {
        return Err(ModelError::Domain {
            what: "bulk density",
            value: bulk,
        });
    }
    if bulk > grain {
        return Err(ModelError::Domain {
            what: "bulk density above grain density",
            value: bulk,
        });
    }
    let filled = (1.0 - bulk / grain) * polymer;
    Ok(filled / (filled + bulk))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolymerPlan {
    pub zone: Zone,
    pub polymer_mass_kg: f64,
    pub refills: u64,
    pub application_time_s: f64,
    pub refill_time_s: f64,
    pub roving_time_s: f64,
}

impl PolymerPlan {
    pub fn total_time_s(&self) -> f64 {
        self.application_time_s + self.refill_time_s + self.roving_time_s
    }
}

pub fn polymer_plan(zone: Zone, p: &ParameterSet, g: &PadGeometry) -> PolymerPlan {
    let area = g.area(zone);
    let (thickness, fraction) = match zone {
        Zone::Inner => (p.inner_polymer_thickness, p.inner_polymer_fraction),
        Zone::Outer => (p.outer_polymer_thickness, p.outer_polymer_fraction),
    };
    let mass = area * thickness * p.compacted_density * fraction;
    let refills = (mass / p.polymer_tank_capacity - 1e-9).ceil().max(0.0) as u64;
    PolymerPlan {
        zone,
        polymer_mass_kg: mass,
        refills,
        application_time_s: p.polymer_application_time_per_m2 * area,
        refill_time_s: refills as f64 * p.polymer_refill_time,
        roving_time_s: refills as f64 * 2.0 * p.polymer_storage_distance / p.driving_speed,
    }
}

/// Polymer application with `scale` sprayer rovers working in parallel.
pub fn polymer_process(zone: Zone, scale: f64, p: &ParameterSet, g: &PadGeometry) -> ProcessResult {
    let plan = polymer_plan(zone, p, g);
    let rovers = units_for(scale);
    let sprayer = p.sprayer_mass * scale;
    let empty = p.rover_mass + sprayer / rovers as f64;
    let full = empty + p.polymer_tank_capacity;

    let trips = plan.refills as f64 * p.polymer_storage_distance;
    let spray_path = g.area(zone) / p.spray_width;
    let energy =
        roving_energy(empty + full, trips, p) + roving_energy(empty + p.polymer_tank_capacity / 2.0, spray_path, p);
    let time = plan.total_time_s() / scale;
    let peak = p.roving_specific_energy * full * p.driving_speed * rovers as f64;

    let mut hours = BTreeMap::new();
    hours.insert(Subsystem::PolymerApplication, time / 3600.0);
    ProcessResult::assemble(
        Process::Polymer,
        zone,
        scale,
        time,
        energy,
        vec![Attachment {
            equipment: Equipment::Sprayer,
            mass_kg: sprayer,
        }],
        plan.polymer_mass_kg,
        rovers,
        peak,
        hours,
        p,
    )
}
