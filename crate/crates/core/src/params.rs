//! Model inputs, unit conversion and pad geometry.
//!
//! Configuration files are flat JSON objects. Every key carries its unit as a
//! suffix and is converted to canonical internal units on load: SI for
//! physical quantities, $M for money, years for program-level durations.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::ConfigError;

/// How hardware development cost enters the cost breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DevCostCharging {
    /// Rate × hardware mass, charged in full.
    Full,
    /// Rate × hardware mass annualized over the solar lifespan and charged
    /// for the construction duration only.
    Amortized,
    /// Development cost is carried by other programs.
    Excluded,
}

impl DevCostCharging {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Full => "full",
            Self::Amortized => "amortized",
            Self::Excluded => "excluded",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "full" => Some(Self::Full),
            "amortized" => Some(Self::Amortized),
            "excluded" => Some(Self::Excluded),
            _ => None,
        }
    }
}

impl fmt::Display for DevCostCharging {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Range check applied to a numeric key after conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Positive,
    NonNegative,
    /// Closed interval [0, 1] after conversion.
    Fraction,
    /// Half-open interval (0, 1] after conversion.
    DutyCycle,
    /// Half-open interval [0, 1) after conversion.
    FeasibilityFactor,
    /// Open interval (0, 1) after conversion.
    Probability,
}

impl Constraint {
    fn holds(self, v: f64) -> bool {
        if !v.is_finite() {
            return false;
        }
        match self {
            Self::Positive => v > 0.0,
            Self::NonNegative => v >= 0.0,
            Self::Fraction => (0.0..=1.0).contains(&v),
            Self::DutyCycle => v > 0.0 && v <= 1.0,
            Self::FeasibilityFactor => (0.0..1.0).contains(&v),
            Self::Probability => v > 0.0 && v < 1.0,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Self::Positive => "must be > 0",
            Self::NonNegative => "must be >= 0",
            Self::Fraction => "must lie in [0, 1] (0-100 for percentages)",
            Self::DutyCycle => "duty cycle out of range: must lie in (0, 1] (0-100 exclusive of 0 for percentages)",
            Self::FeasibilityFactor => "must lie in [0, 1)",
            Self::Probability => "must lie strictly between 0 and 1 (0-100 for percentages)",
        }
    }
}

macro_rules! parameter_set {
    ($(
        $(#[doc = $doc:literal])+
        $field:ident : $key:literal, $unit:literal, $to_internal:expr, $default:expr, $check:ident;
    )*) => {
        /// Every tunable input of the trade model, in canonical internal units.
        #[derive(Debug, Clone, PartialEq)]
        pub struct ParameterSet {
            $( $(#[doc = $doc])+ pub $field: f64, )*
            /// Development-cost charging mode.
            pub dev_cost_charging: DevCostCharging,
        }

        impl Default for ParameterSet {
            fn default() -> Self {
                Self {
                    $( $field: $default * $to_internal, )*
                    dev_cost_charging: DevCostCharging::Amortized,
                }
            }
        }

        /// The key dictionary: configuration key, unit, conversion to internal
        /// units, default in configuration units, constraint and description.
        pub const KEYS: &[KeySpec] = &[
            $( KeySpec {
                key: $key,
                unit: $unit,
                to_internal: $to_internal,
                default: $default,
                constraint: Constraint::$check,
                doc: concat!($($doc),+),
                get: |p| p.$field,
                set: |p, v| p.$field = v,
            }, )*
        ];
    };
}

/// One entry of the configuration key dictionary.
#[derive(Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub unit: &'static str,
    pub to_internal: f64,
    pub default: f64,
    pub constraint: Constraint,
    pub doc: &'static str,
    get: fn(&ParameterSet) -> f64,
    set: fn(&mut ParameterSet, f64),
}

impl KeySpec {
    /// Value in configuration units.
    pub fn config_value(&self, p: &ParameterSet) -> f64 {
        (self.get)(p) / self.to_internal
    }

    /// Value in internal units.
    pub fn internal_value(&self, p: &ParameterSet) -> f64 {
        (self.get)(p)
    }

    /// Sets the field from a value in configuration units.
    pub fn set_config_value(&self, p: &mut ParameterSet, v: f64) {
        (self.set)(p, v * self.to_internal)
    }
}

impl fmt::Debug for KeySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeySpec")
            .field("key", &self.key)
            .field("unit", &self.unit)
            .field("default", &self.default)
            .finish()
    }
}

/// Configuration key for the development-cost switch.
pub const DEV_COST_CHARGING_KEY: &str = "dev_cost_charging";

const KWH: f64 = 3.6e6;
const CM: f64 = 0.01;
const PCT: f64 = 0.01;

parameter_set! {
    /// Budgeted cost of the lunar program.
    program_budget: "program_budget_b", "$B", 1000.0, 160.0, Positive;
    /// Expected return multiple on the program budget (1x, 4x or 20x scenarios).
    value_multiple: "value_multiple_x", "x", 1.0, 4.0, Positive;
    /// Annual operational budget of the outpost.
    annual_ops_budget: "annual_ops_budget_b_per_yr", "$B/yr", 1000.0, 3.0, NonNegative;
    /// Program duration.
    program_duration_yr: "program_duration_yr", "yr", 1.0, 20.0, Positive;
    /// Discount rate for federal money.
    discount_rate: "discount_rate_pct", "%/yr", PCT, 3.5, NonNegative;
    /// Fraction of program activity that can be reprogrammed around a delay.
    mitigation_fraction: "reprogrammable_fraction_pct", "%", PCT, 75.0, Fraction;
    /// Hardware development cost rate.
    dev_cost_rate: "dev_cost_rate_m_per_kg", "$M/kg", 1.0, 1.684, NonNegative;
    /// Transportation cost to the lunar surface.
    transport_cost: "transport_cost_k_per_kg", "$K/kg", 1e-3, 300.0, NonNegative;
    /// Yearly operations cost of pad construction.
    pad_ops_cost_per_yr: "pad_ops_cost_m_per_yr", "$M/yr", 1.0, 124.0, NonNegative;
    /// Solar photovoltaic mass-to-power ratio.
    solar_mass_to_power: "solar_mass_to_power_kg_per_kw", "kg/kW", 1e-3, 30.0, NonNegative;
    /// Solar photovoltaic lifespan.
    solar_lifespan_yr: "solar_lifespan_yr", "yr", 1.0, 20.0, Positive;
    /// Fraction of calendar time that solar power permits surface work.
    duty_cycle: "solar_duty_cycle_pct", "%", PCT, 80.0, DutyCycle;

    /// Inner (stagnation) zone radius.
    r_inner: "inner_radius_m", "m", 1.0, 12.0, Positive;
    /// Outer (apron) zone radius.
    r_outer: "outer_radius_m", "m", 1.0, 27.0, Positive;
    /// Density of soil before compaction.
    loose_soil_density: "loose_soil_density_kg_per_m3", "kg/m3", 1.0, 1500.0, Positive;
    /// Specific gravity of regolith minerals, expressed as grain density.
    mineral_density: "mineral_specific_gravity_kg_per_m3", "kg/m3", 1.0, 3100.0, Positive;

    /// Mass of one general-purpose rover.
    rover_mass: "rover_mass_kg", "kg", 1.0, 300.0, Positive;
    /// Rover driving speed.
    driving_speed: "driving_speed_m_per_s", "m/s", 1.0, 1.0, Positive;
    /// Roving energy per kilogram per metre.
    roving_specific_energy: "roving_specific_energy_j_per_kg_m", "J/kg/m", 1.0, 2.5, NonNegative;
    /// Area graded per second by one grader.
    grading_rate: "grading_rate_m2_per_s", "m2/s", 1.0, 0.1, Positive;
    /// Area compacted per second by one compactor.
    compacting_rate: "compacting_rate_m2_per_s", "m2/s", 1.0, 0.05, Positive;
    /// Grader blade width.
    blade_width: "grader_blade_width_m", "m", 1.0, 1.5, Positive;
    /// Blade work per metre of grading path.
    grading_energy_per_m: "grading_energy_kwh_per_m", "kWh/m", KWH, 0.0167, NonNegative;
    /// Compactor attachment mass.
    compactor_mass: "compactor_mass_kg", "kg", 1.0, 200.0, Positive;
    /// Grading blade attachment mass.
    blade_mass: "grading_blade_mass_kg", "kg", 1.0, 300.0, Positive;
    /// Density of regolith after compaction.
    compacted_density: "compacted_density_kg_per_m3", "kg/m3", 1.0, 2200.0, Positive;
    /// Compactor plate electrical power.
    compactor_power: "compactor_power_kw", "kW", 1e3, 4.26, NonNegative;

    /// Thickness of the rock pad.
    rock_pad_thickness: "rock_pad_thickness_cm", "cm", CM, 22.86, Positive;
    /// Number of rock layers (one per size class).
    rock_layers: "rock_layers", "-", 1.0, 4.0, Positive;
    /// Raking and sorting rover mass including its rake.
    raking_rover_mass: "raking_rover_mass_kg", "kg", 1.0, 1000.0, Positive;
    /// Rock laying rover mass including its laying device.
    rock_laying_rover_mass: "rock_laying_rover_mass_kg", "kg", 1.0, 600.0, Positive;
    /// Fraction of regolith that is usable rock (retained, not used by the model).
    usable_rock_fraction: "usable_rock_fraction_pct", "wt%", PCT, 4.0, Fraction;
    /// Bulk density of the packed rock pad.
    packed_rock_density: "packed_rock_density_kg_per_m3", "kg/m3", 1.0, 2200.0, Positive;
    /// Rock rake width.
    rake_width: "rake_width_m", "m", 1.0, 1.0, Positive;
    /// Raking depth of the largest rock class.
    max_raking_depth: "raking_depth_m", "m", 1.0, 0.1016, Positive;
    /// Rock raking speed.
    raking_speed: "raking_speed_m_per_s", "m/s", 1.0, 0.667, Positive;
    /// Time to lay rock per unit area.
    rock_lay_time_per_m2: "rock_lay_time_s_per_m2", "s/m2", 1.0, 300.0, NonNegative;
    /// Width of the rock laying device.
    rock_laying_width: "rock_laying_width_m", "m", 1.0, 1.0, Positive;
    /// Rake power at the deepest raking depth.
    rake_power_at_max_depth: "rake_power_at_max_depth_w", "W", 1.0, 982.0, NonNegative;
    /// Trommel sorting energy per mass of rock.
    trommel_energy_per_kg: "trommel_energy_kwh_per_t", "kWh/t", KWH / 1000.0, 0.433, NonNegative;
    /// Rock load per hauling trip.
    rock_load_per_trip: "rock_load_per_trip_kg", "kg", 1.0, 1000.0, Positive;
    /// Round-trip hauling distance per rock load.
    gravel_haul_round_trip: "gravel_haul_round_trip_m", "m", 1.0, 100.0, NonNegative;

    /// Sintered thickness of the inner pad.
    inner_sinter_thickness: "inner_sinter_thickness_cm", "cm", CM, 7.62, Positive;
    /// Sintered thickness of the outer pad.
    outer_sinter_thickness: "outer_sinter_thickness_cm", "cm", CM, 2.54, Positive;
    /// Maximum sintering payload per rover.
    max_sinter_payload: "max_sinter_payload_per_rover_kg", "kg", 1.0, 1000.0, Positive;
    /// Density of the sintered pad.
    sintered_density: "sintered_density_kg_per_m3", "kg/m3", 1.0, 2200.0, Positive;
    /// Consumed sintering power at the non-optimized scale.
    sinter_power: "sinter_power_kw", "kW", 1e3, 200.0, Positive;
    /// Fraction of consumed power delivered as microwave flux.
    magnetron_efficiency: "magnetron_efficiency_fraction", "-", 1.0, 0.5, Positive;
    /// Power-to-mass ratio of terrestrial magnetron systems.
    magnetron_power_to_mass: "terrestrial_magnetron_power_to_mass_kw_per_kg", "kW/kg", 1e3, 3.0 / 260.0, Positive;
    /// Mass reduction factor for flight magnetron systems.
    magnetron_mass_factor: "magnetron_mass_factor_fraction", "-", 1.0, 0.2, Positive;
    /// Applied microwave energy per area, inner pad.
    inner_sinter_energy_per_m2: "inner_sinter_energy_kwh_per_m2", "kWh/m2", KWH, 21.73, Positive;
    /// Applied microwave energy per area, outer pad.
    outer_sinter_energy_per_m2: "outer_sinter_energy_kwh_per_m2", "kWh/m2", KWH, 18.45, Positive;
    /// Regolith temperature before heating.
    start_temperature_c: "regolith_start_temperature_c", "degC", 1.0, 127.0, Positive;
    /// Sintering temperature.
    sinter_temperature_c: "sinter_temperature_c", "degC", 1.0, 1200.0, Positive;

    /// Polymer-infused thickness of the inner pad.
    inner_polymer_thickness: "inner_polymer_thickness_cm", "cm", CM, 5.08, Positive;
    /// Polymer-infused thickness of the outer pad.
    outer_polymer_thickness: "outer_polymer_thickness_cm", "cm", CM, 2.54, Positive;
    /// Polymer mass fraction of the outer pad.
    outer_polymer_fraction: "outer_polymer_mass_fraction_pct", "wt%", PCT, 7.0, Fraction;
    /// Polymer mass fraction of the inner pad.
    inner_polymer_fraction: "inner_polymer_mass_fraction_pct", "wt%", PCT, 11.66, Fraction;
    /// Sprayer and infusion assembly mass.
    sprayer_mass: "sprayer_mass_kg", "kg", 1.0, 100.0, Positive;
    /// Polymer mass in a full rover tank.
    polymer_tank_capacity: "polymer_tank_capacity_kg", "kg", 1.0, 1000.0, Positive;
    /// Tank refill dwell time.
    polymer_refill_time: "polymer_refill_time_min", "min", 60.0, 30.0, NonNegative;
    /// Polymer application time per area.
    polymer_application_time_per_m2: "polymer_application_time_s_per_m2", "s/m2", 1.0, 10.0, NonNegative;
    /// Spray width.
    spray_width: "spray_width_m", "m", 1.0, 1.0, Positive;
    /// Polymer density.
    polymer_density: "polymer_density_kg_per_m3", "kg/m3", 1.0, 1000.0, Positive;
    /// One-way distance from polymer storage to the pad.
    polymer_storage_distance: "polymer_storage_distance_km", "km", 1000.0, 1.0, NonNegative;

    /// Paver thickness, inner pad.
    inner_paver_thickness: "inner_paver_thickness_cm", "cm", CM, 7.62, Positive;
    /// Paver thickness, outer pad.
    outer_paver_thickness: "outer_paver_thickness_cm", "cm", CM, 2.54, Positive;
    /// Side of the square paver.
    paver_size: "paver_size_cm", "cm", CM, 45.72, Positive;
    /// Paver material density.
    paver_density: "paver_density_kg_per_m3", "kg/m3", 1.0, 2200.0, Positive;
    /// Oven and associated mechanisms mass.
    oven_mass: "oven_mass_kg", "kg", 1.0, 1000.0, Positive;
    /// Distance from the outer pad edge to the oven.
    oven_offset: "oven_distance_m", "m", 1.0, 20.0, NonNegative;
    /// Paver installation robotic arm mass.
    install_arm_mass: "install_arm_mass_kg", "kg", 1.0, 100.0, Positive;
    /// Feedstock excavator implement mass.
    excavator_mass: "excavator_mass_kg", "kg", 1.0, 100.0, Positive;
    /// Excavator bucket width.
    bucket_width: "excavator_bucket_width_m", "m", 1.0, 0.5, Positive;
    /// Excavator bite depth.
    bite_depth: "excavator_bite_depth_m", "m", 1.0, 0.3, Positive;
    /// Feedstock excavation rate.
    excavation_rate: "excavation_rate_kg_per_s", "kg/s", 1.0, 2.286, Positive;
    /// Feedstock excavator power.
    excavator_power: "excavator_power_kw", "kW", 1e3, 4.0, NonNegative;
    /// Feedstock load per rover trip.
    feedstock_load: "feedstock_load_kg", "kg", 1.0, 1000.0, Positive;
    /// Time to fill molds and place them in the oven, per paver.
    mold_fill_time: "mold_fill_time_s", "s", 1.0, 30.0, NonNegative;
    /// Oven sintering temperature (heating boundary condition).
    oven_sinter_temperature_c: "oven_sinter_temperature_c", "degC", 1.0, 1120.0, Positive;
    /// Oven starting temperature (heating boundary condition).
    oven_start_temperature_c: "oven_start_temperature_c", "degC", 1.0, 100.0, Positive;
    /// Average thermal conductivity in packed molds.
    mold_conductivity: "mold_conductivity_mw_per_m_k", "mW/m/K", 1e-3, 346.99, Positive;
    /// Average specific heat in packed molds.
    mold_specific_heat: "mold_specific_heat_j_per_kg_k", "J/kg/K", 1.0, 1095.19, Positive;
    /// Oven cooling time as a fraction of heating time.
    cooling_factor: "oven_cooling_factor", "-", 1.0, 0.5, NonNegative;
    /// Oven energy efficiency.
    oven_efficiency: "oven_efficiency_fraction", "-", 1.0, 0.6, Positive;
    /// Transfer time from oven to rover, per paver.
    oven_transfer_time: "oven_transfer_time_s", "s", 1.0, 15.0, NonNegative;
    /// Maximum paver load on a hauling rover; also sets oven mold capacity.
    max_paver_load: "max_paver_load_kg", "kg", 1.0, 1000.0, Positive;
    /// Installation time per paver.
    paver_install_time: "paver_install_time_s", "s", 1.0, 60.0, NonNegative;
    /// Installation robot power.
    install_power: "install_robot_power_w", "W", 1.0, 400.0, NonNegative;
    /// Grout density.
    grout_density: "grout_density_kg_per_m3", "kg/m3", 1.0, 1500.0, Positive;
    /// Grout bead radius.
    grout_bead_radius: "grout_bead_radius_mm", "mm", 1e-3, 3.0, NonNegative;
    /// Grout insertion rate.
    grout_rate: "grout_rate_cm_per_s", "cm/s", CM, 1.0, Positive;

    /// System reliability every method is matured to.
    reliability_target: "reliability_target_pct", "%", PCT, 99.0, Probability;
    /// Feasibility factor of the cost-reliability model.
    reliability_feasibility: "reliability_feasibility_fraction", "-", 1.0, 0.5, FeasibilityFactor;
}

impl ParameterSet {
    /// Looks up a key dictionary entry.
    pub fn key_spec(key: &str) -> Option<&'static KeySpec> {
        KEYS.iter().find(|k| k.key == key)
    }

    /// Returns a copy with one key overridden, value in configuration units.
    pub fn with(&self, key: &str, value: f64) -> Result<Self, ConfigError> {
        let spec = Self::key_spec(key).ok_or_else(|| ConfigError::UnknownKey(key.to_string()))?;
        let mut p = self.clone();
        spec.set_config_value(&mut p, value);
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for k in KEYS {
            let v = k.internal_value(self);
            if !k.constraint.holds(v) {
                return Err(ConfigError::Invalid {
                    key: k.key.to_string(),
                    value: k.config_value(self),
                    constraint: k.constraint.describe().to_string(),
                });
            }
        }
        if self.r_outer <= self.r_inner {
            return Err(ConfigError::Invalid {
                key: "outer_radius_m".into(),
                value: self.r_outer,
                constraint: "must exceed inner_radius_m".into(),
            });
        }
        if self.compacted_density > self.mineral_density {
            return Err(ConfigError::Invalid {
                key: "compacted_density_kg_per_m3".into(),
                value: self.compacted_density,
                constraint: "must not exceed mineral_specific_gravity_kg_per_m3".into(),
            });
        }
        if self.rock_layers.fract() != 0.0 {
            return Err(ConfigError::Invalid {
                key: "rock_layers".into(),
                value: self.rock_layers,
                constraint: "must be a whole number".into(),
            });
        }
        Ok(())
    }

    /// Serializes to a configuration JSON object holding every key.
    pub fn to_config(&self) -> Map<String, Value> {
        let mut m = Map::new();
        for k in KEYS {
            m.insert(k.key.to_string(), Value::from(k.config_value(self)));
        }
        m.insert(
            DEV_COST_CHARGING_KEY.to_string(),
            Value::from(self.dev_cost_charging.as_str()),
        );
        m
    }

    pub fn to_config_string(&self) -> String {
        serde_json::to_string_pretty(&Value::Object(self.to_config())).expect("finite values")
    }

    /// Markdown table of the configuration key dictionary.
    pub fn key_dictionary_markdown() -> String {
        let mut s = String::from("| key | unit | default | constraint | description |\n|---|---|---|---|---|\n");
        for k in KEYS {
            s.push_str(&format!(
                "| `{}` | {} | {} | {} | {} |\n",
                k.key,
                k.unit,
                k.default,
                k.constraint.describe(),
                k.doc.trim()
            ));
        }
        s.push_str(&format!(
            "| `{DEV_COST_CHARGING_KEY}` | - | amortized | one of full, amortized, excluded | Development-cost charging mode. |\n"
        ));
        s
    }
}

/// Parses a configuration document. Missing keys keep their defaults.
pub fn load_parameters(config_text: &str) -> Result<ParameterSet, ConfigError> {
    let mut p = ParameterSet::default();
    if config_text.trim().is_empty() {
        return Ok(p);
    }
    let v: Value = serde_json::from_str(config_text)?;
    let Value::Object(obj) = v else {
        return Err(ConfigError::NotAnObject);
    };
    for (key, value) in &obj {
        if key == DEV_COST_CHARGING_KEY {
            let s = value.as_str().ok_or_else(|| ConfigError::WrongType {
                key: key.clone(),
                expected: "string",
            })?;
            p.dev_cost_charging = DevCostCharging::parse(s).ok_or_else(|| ConfigError::BadChoice {
                key: key.clone(),
                value: s.to_string(),
            })?;
            continue;
        }
        let spec = ParameterSet::key_spec(key).ok_or_else(|| ConfigError::UnknownKey(key.clone()))?;
        let x = value.as_f64().ok_or_else(|| ConfigError::WrongType {
            key: key.clone(),
            expected: "number",
        })?;
        spec.set_config_value(&mut p, x);
    }
    p.validate()?;
    Ok(p)
}

/// Pad zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    Inner,
    Outer,
}

impl Zone {
    pub const BOTH: [Zone; 2] = [Zone::Inner, Zone::Outer];

    pub fn as_str(self) -> &'static str {
        match self {
            Zone::Inner => "inner",
            Zone::Outer => "outer",
        }
    }
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Areas, volumes and paver inventory derived from the parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PadGeometry {
    pub inner_area: f64,
    pub outer_area: f64,
    pub inner_volume: f64,
    pub outer_volume: f64,
    pub inner_mass: f64,
    pub outer_mass: f64,
    pub inner_paver_count: u64,
    pub outer_paver_count: u64,
    pub inner_paver_mass: f64,
    pub outer_paver_mass: f64,
    /// Mean straight-line distance from points of each zone to the oven.
    pub inner_oven_distance: f64,
    pub outer_oven_distance: f64,
}

impl PadGeometry {
    pub fn area(&self, z: Zone) -> f64 {
        match z {
            Zone::Inner => self.inner_area,
            Zone::Outer => self.outer_area,
        }
    }

    /// Sintered pad volume of a zone.
    pub fn volume(&self, z: Zone) -> f64 {
        match z {
            Zone::Inner => self.inner_volume,
            Zone::Outer => self.outer_volume,
        }
    }

    /// Sintered pad mass of a zone.
    pub fn mass(&self, z: Zone) -> f64 {
        match z {
            Zone::Inner => self.inner_mass,
            Zone::Outer => self.outer_mass,
        }
    }

    pub fn paver_count(&self, z: Zone) -> u64 {
        match z {
            Zone::Inner => self.inner_paver_count,
            Zone::Outer => self.outer_paver_count,
        }
    }

    pub fn paver_mass(&self, z: Zone) -> f64 {
        match z {
            Zone::Inner => self.inner_paver_mass,
            Zone::Outer => self.outer_paver_mass,
        }
    }

    pub fn oven_distance(&self, z: Zone) -> f64 {
        match z {
            Zone::Inner => self.inner_oven_distance,
            Zone::Outer => self.outer_oven_distance,
        }
    }
}

pub fn derive_geometry(p: &ParameterSet) -> PadGeometry {
    let inner_area = PI * p.r_inner * p.r_inner;
    let outer_area = PI * (p.r_outer * p.r_outer - p.r_inner * p.r_inner);
    let inner_volume = inner_area * p.inner_sinter_thickness;
    let outer_volume = outer_area * p.outer_sinter_thickness;
    let footprint = p.paver_size * p.paver_size;
    let count = |a: f64| (a / footprint - 1e-9).ceil().max(0.0) as u64;
    let oven_x = p.r_outer + p.oven_offset;
    PadGeometry {
        inner_area,
        outer_area,
        inner_volume,
        outer_volume,
        inner_mass: inner_volume * p.compacted_density,
        outer_mass: outer_volume * p.compacted_density,
        inner_paver_count: count(inner_area),
        outer_paver_count: count(outer_area),
        inner_paver_mass: footprint * p.inner_paver_thickness * p.paver_density,
        outer_paver_mass: footprint * p.outer_paver_thickness * p.paver_density,
        inner_oven_distance: mean_distance_to_point(0.0, p.r_inner, oven_x),
        outer_oven_distance: mean_distance_to_point(p.r_inner, p.r_outer, oven_x),
    }
}

/// Area-weighted mean distance from points of the annulus r0 ≤ r ≤ r1 to a
/// point at distance `d` from the centre. Gauss-Legendre in r, midpoint in θ.
fn mean_distance_to_point(r0: f64, r1: f64, d: f64) -> f64 {
    #[allow(clippy::excessive_precision)]
    const NODES: [(f64, f64); 8] = [
        (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
        (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
        (-0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
        (-0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
        (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
        (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
        (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
        (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    ];
    const PANELS: usize = 16;
    const N_THETA: usize = 720;
    let h = (r1 - r0) / PANELS as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for panel in 0..PANELS {
        let a = r0 + h * panel as f64;
        for &(x, w) in &NODES {
            let r = a + 0.5 * h * (x + 1.0);
            let mut ring = 0.0;
            for j in 0..N_THETA {
                let th = 2.0 * PI * (j as f64 + 0.5) / N_THETA as f64;
                ring += (r * r + d * d - 2.0 * r * d * th.cos()).sqrt();
            }
            ring /= N_THETA as f64;
            num += w * r * ring;
            den += w * r;
        }
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let p = load_parameters("").unwrap();
        assert_eq!(p, ParameterSet::default());
        let p = load_parameters("{}").unwrap();
        assert_eq!(p, ParameterSet::default());
        assert!((p.transport_cost - 0.3).abs() < 1e-12);
        assert!((p.discount_rate - 0.035).abs() < 1e-12);
    }

    #[test]
    fn single_override() {
        let p = load_parameters(r#"{"transport_cost_k_per_kg": 100}"#).unwrap();
        assert!((p.transport_cost - 0.1).abs() < 1e-12);
        let d = ParameterSet {
            transport_cost: p.transport_cost,
            ..ParameterSet::default()
        };
        assert_eq!(p, d);
    }

    #[test]
    fn zero_duty_cycle_rejected() {
        let e = load_parameters(r#"{"solar_duty_cycle_pct": 0}"#).unwrap_err();
        assert!(e.to_string().contains("duty cycle out of range"), "{e}");
        assert!(e.to_string().contains("solar_duty_cycle_pct"));
    }

    #[test]
    fn unknown_key_rejected() {
        let e = load_parameters(r#"{"warp_factor": 9}"#).unwrap_err();
        assert!(matches!(e, ConfigError::UnknownKey(_)));
    }

    #[test]
    fn radius_ordering_enforced() {
        assert!(load_parameters(r#"{"outer_radius_m": 10}"#).is_err());
        assert!(load_parameters(r#"{"compacted_density_kg_per_m3": 3200}"#).is_err());
    }

    #[test]
    fn dev_switch_parses() {
        let p = load_parameters(r#"{"dev_cost_charging": "full"}"#).unwrap();
        assert_eq!(p.dev_cost_charging, DevCostCharging::Full);
        assert!(load_parameters(r#"{"dev_cost_charging": "sometimes"}"#).is_err());
    }

    #[test]
    fn keys_are_unique() {
        let mut keys: Vec<_> = KEYS.iter().map(|k| k.key).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), KEYS.len());
    }

    #[test]
    fn default_geometry() {
        let g = derive_geometry(&ParameterSet::default());
        assert!((g.inner_area - 452.389).abs() < 1e-3);
        assert!((g.outer_area - 1837.832).abs() < 1e-3);
        assert!((g.inner_paver_mass - 35.04).abs() < 0.01);
        assert_eq!(g.inner_paver_count, 2165);
        assert_eq!(g.outer_paver_count, 8793);
    }

    #[test]
    fn mean_distance_limits() {
        // Far away point: mean distance tends to the centre distance.
        let d = mean_distance_to_point(0.0, 1.0, 1000.0);
        assert!((d - 1000.0).abs() < 0.01);
        // Disc to its own centre: 2R/3.
        let d = mean_distance_to_point(0.0, 3.0, 0.0);
        assert!((d - 2.0).abs() < 1e-9);
    }
}
