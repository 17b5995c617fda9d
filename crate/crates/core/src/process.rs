//! Result record shared by every construction process.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::params::{ParameterSet, Zone, KEYS};

pub const SECONDS_PER_DAY: f64 = 86_400.0;
pub const J_PER_MWH: f64 = 3.6e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Process {
    Grading,
    Compacting,
    Sintering,
    Pavers,
    Gravel,
    Polymer,
}

impl Process {
    pub fn as_str(self) -> &'static str {
        match self {
            Process::Grading => "grading",
            Process::Compacting => "compacting",
            Process::Sintering => "sintering",
            Process::Pavers => "pavers",
            Process::Gravel => "gravel",
            Process::Polymer => "polymer",
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rover-borne or stationary equipment other than the rovers themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equipment {
    GradingBlade,
    Compactor,
    Magnetrons,
    Oven,
    InstallArm,
    Excavator,
    Rake,
    RockLayer,
    Sprayer,
}

impl Equipment {
    pub fn as_str(self) -> &'static str {
        match self {
            Equipment::GradingBlade => "grading_blade",
            Equipment::Compactor => "compactor",
            Equipment::Magnetrons => "magnetrons",
            Equipment::Oven => "oven",
            Equipment::InstallArm => "install_arm",
            Equipment::Excavator => "excavator",
            Equipment::Rake => "rake",
            Equipment::RockLayer => "rock_layer",
            Equipment::Sprayer => "sprayer",
        }
    }
}

/// Subsystems rated for reliability allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subsystem {
    GradingCompacting,
    Sintering,
    PolymerApplication,
    Excavating,
    Hauling,
    OvenRobotics,
    Baking,
    LayingPavers,
    Grouting,
    Raking,
    Sorting,
    LayingRock,
}

impl Subsystem {
    pub const ALL: [Subsystem; 12] = [
        Subsystem::GradingCompacting,
        Subsystem::Sintering,
        Subsystem::PolymerApplication,
        Subsystem::Excavating,
        Subsystem::Hauling,
        Subsystem::OvenRobotics,
        Subsystem::Baking,
        Subsystem::LayingPavers,
        Subsystem::Grouting,
        Subsystem::Raking,
        Subsystem::Sorting,
        Subsystem::LayingRock,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Subsystem::GradingCompacting => "grading_compacting",
            Subsystem::Sintering => "sintering",
            Subsystem::PolymerApplication => "polymer_application",
            Subsystem::Excavating => "excavating",
            Subsystem::Hauling => "hauling",
            Subsystem::OvenRobotics => "oven_robotics",
            Subsystem::Baking => "baking",
            Subsystem::LayingPavers => "laying_pavers",
            Subsystem::Grouting => "grouting",
            Subsystem::Raking => "raking",
            Subsystem::Sorting => "sorting",
            Subsystem::LayingRock => "laying_rock",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.as_str() == s)
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attachment {
    pub equipment: Equipment,
    pub mass_kg: f64,
}

/// Time, energy, mass and operating hours of one process at one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessResult {
    pub process: Process,
    pub zone: Zone,
    pub scale: f64,
    /// Working days, not adjusted for duty cycle.
    pub time_days: f64,
    pub energy_mwh: f64,
    /// Attachments plus rovers.
    pub hardware_mass_kg: f64,
    pub consumable_mass_kg: f64,
    pub rover_count: u32,
    pub rover_unit_mass_kg: f64,
    pub peak_power_kw: f64,
    pub attachments: Vec<Attachment>,
    pub subsystem_hours: BTreeMap<Subsystem, f64>,
    /// Hash of the parameter set the result was computed with.
    pub fingerprint: u64,
}

impl ProcessResult {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        process: Process,
        zone: Zone,
        scale: f64,
        time_s: f64,
        energy_j: f64,
        attachments: Vec<Attachment>,
        consumable_mass_kg: f64,
        rover_count: u32,
        peak_power_w: f64,
        subsystem_hours: BTreeMap<Subsystem, f64>,
        p: &ParameterSet,
    ) -> Self {
        let attach: f64 = attachments.iter().map(|a| a.mass_kg).sum();
        ProcessResult {
            process,
            zone,
            scale,
            time_days: time_s / SECONDS_PER_DAY,
            energy_mwh: energy_j / J_PER_MWH,
            hardware_mass_kg: attach + rover_count as f64 * p.rover_mass,
            consumable_mass_kg,
            rover_count,
            rover_unit_mass_kg: p.rover_mass,
            peak_power_kw: peak_power_w / 1e3,
            attachments,
            subsystem_hours,
            fingerprint: fingerprint(p),
        }
    }

    pub fn attachment_mass_kg(&self) -> f64 {
        self.attachments.iter().map(|a| a.mass_kg).sum()
    }

    pub fn time_hours(&self) -> f64 {
        self.time_days * 24.0
    }
}

/// Number of whole units needed to carry a continuous fleet of `scale` units.
pub(crate) fn units_for(scale: f64) -> u32 {
    if scale <= 0.0 {
        0
    } else {
        (scale - 1e-9).ceil().max(1.0) as u32
    }
}

pub fn fingerprint(p: &ParameterSet) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for k in KEYS {
        k.internal_value(p).to_bits().hash(&mut h);
    }
    p.dev_cost_charging.hash(&mut h);
    h.finish()
}
