//! Reliability allocation: subsystem ratings to relative failure rates,
//! normalized baseline reliabilities, minimum-effort improvement goals and
//! the development-cost factor needed to reach them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::costing::CombinedPlan;
use crate::error::ModelError;
use crate::params::Zone;
use crate::process::{Equipment, Subsystem};

const DEFAULT_RATINGS: &str = include_str!("../data/ratings.csv");

/// Engineering ratings of one subsystem, each 1 to 10.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rating {
    pub intricacy: u8,
    pub state_of_art: u8,
    pub environment: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingTable(pub BTreeMap<Subsystem, Rating>);

impl Default for RatingTable {
    fn default() -> Self {
        parse_ratings(DEFAULT_RATINGS.as_bytes()).expect("shipped ratings are valid")
    }
}

impl RatingTable {
    pub fn get(&self, s: Subsystem) -> Result<Rating, ModelError> {
        self.0
            .get(&s)
            .copied()
            .ok_or_else(|| ModelError::RatingsTable(format!("no rating for `{s}`")))
    }
}

/// Reads a `subsystem,intricacy,state_of_art,environment` CSV. Rows not
/// listed keep their default ratings.
pub fn parse_ratings<R: Read>(r: R) -> Result<RatingTable, ModelError> {
    #[derive(Deserialize)]
    struct Row {
        subsystem: String,
        intricacy: u8,
        state_of_art: u8,
        environment: u8,
    }
    let mut out = BTreeMap::new();
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    for row in rdr.deserialize() {
        let row: Row = row?;
        let s = Subsystem::parse(&row.subsystem)
            .ok_or_else(|| ModelError::RatingsTable(format!("unknown subsystem `{}`", row.subsystem)))?;
        for v in [row.intricacy, row.state_of_art, row.environment] {
            if !(1..=10).contains(&v) {
                return Err(ModelError::RatingsTable(format!("rating {v} for `{s}` outside 1-10")));
            }
        }
        out.insert(
            s,
            Rating {
                intricacy: row.intricacy,
                state_of_art: row.state_of_art,
                environment: row.environment,
            },
        );
    }
    Ok(RatingTable(out))
}

/// Reads a ratings CSV on top of the default table.
pub fn load_ratings<R: Read>(r: R) -> Result<RatingTable, ModelError> {
    let mut table = RatingTable::default();
    table.0.extend(parse_ratings(r)?.0);
    Ok(table)
}

/// Allocation unit: one or more rated subsystems sharing a hardware platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    RoverOperations,
    Sintering,
    PolymerApplication,
    Excavating,
    OvenRobotics,
    Baking,
    LayingPavers,
    Grouting,
    RakingSorting,
    LayingRock,
}

impl Group {
    pub fn of(s: Subsystem) -> Group {
        match s {
            Subsystem::GradingCompacting | Subsystem::Hauling => Group::RoverOperations,
            Subsystem::Sintering => Group::Sintering,
            Subsystem::PolymerApplication => Group::PolymerApplication,
            Subsystem::Excavating => Group::Excavating,
            Subsystem::OvenRobotics => Group::OvenRobotics,
            Subsystem::Baking => Group::Baking,
            Subsystem::LayingPavers => Group::LayingPavers,
            Subsystem::Grouting => Group::Grouting,
            Subsystem::Raking | Subsystem::Sorting => Group::RakingSorting,
            Subsystem::LayingRock => Group::LayingRock,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Group::RoverOperations => "rover_operations",
            Group::Sintering => "sintering",
            Group::PolymerApplication => "polymer_application",
            Group::Excavating => "excavating",
            Group::OvenRobotics => "oven_robotics",
            Group::Baking => "baking",
            Group::LayingPavers => "laying_pavers",
            Group::Grouting => "grouting",
            Group::RakingSorting => "raking_sorting",
            Group::LayingRock => "laying_rock",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rating 0-10 proportional to operating hours, 10 at the longest.
pub fn time_ratings(hours: &[f64]) -> Result<Vec<f64>, ModelError> {
    let max = hours.iter().cloned().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(ModelError::Domain {
            what: "maximum operating hours",
            value: max,
        });
    }
    Ok(hours.iter().map(|h| 10.0 * h / max).collect())
}

pub fn relative_failure_rate(r: &Rating, time_rating: f64) -> f64 {
    r.intricacy as f64 * r.state_of_art as f64 * time_rating * r.environment as f64
}

/// Normalization constant that puts the most reliable system at `target`.
pub fn normalize_lambda(system_totals: &[f64], target: f64) -> f64 {
    let min = system_totals.iter().cloned().fold(f64::INFINITY, f64::min);
    -min / target.ln()
}

pub fn baseline_reliability(lambda: f64, norm: f64) -> f64 {
    (-lambda / norm).exp()
}

/// Minimum-effort goals: the least reliable subsystems are raised to a
/// common level so that the product of goals meets `target`.
pub fn minimize_effort(baselines: &[f64], target: f64) -> Vec<f64> {
    let product: f64 = baselines.iter().product();
    if product >= target {
        return baselines.to_vec();
    }
    let mut raise = vec![true; baselines.len()];
    let mut level;
    loop {
        let kept: f64 = baselines
            .iter()
            .zip(&raise)
            .filter(|(_, &r)| !r)
            .map(|(b, _)| b)
            .product();
        let n = raise.iter().filter(|&&r| r).count();
        if n == 0 {
            return baselines.to_vec();
        }
        level = (target / kept).powf(1.0 / n as f64);
        let mut changed = false;
        for (i, b) in baselines.iter().enumerate() {
            if raise[i] && *b >= level {
                raise[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    baselines
        .iter()
        .zip(&raise)
        .map(|(&b, &r)| if r { level } else { b })
        .collect()
}

/// Development-cost multiplier to raise a subsystem from `r_min` to `r_goal`
/// with improvement feasibility `f`, relative to a maximum reliability of 1.
pub fn mettas_cost(r_goal: f64, r_min: f64, f: f64) -> Result<f64, ModelError> {
    if r_goal < r_min - 1e-12 {
        return Err(ModelError::GoalBelowMinimum {
            goal: r_goal,
            min: r_min,
        });
    }
    if r_min >= 1.0 {
        return Ok(1.0);
    }
    Ok(((1.0 - f) * (r_goal - r_min).max(0.0) / (1.0 - r_min)).exp())
}

/// Mass-weighted system cost factor from (fraction, factor) pairs.
pub fn system_cost_factor(weighted: &[(f64, f64)]) -> Result<f64, ModelError> {
    let sum: f64 = weighted.iter().map(|w| w.0).sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(ModelError::WeightSum(sum));
    }
    Ok(weighted.iter().map(|(phi, c)| phi * c).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoursRow {
    pub subsystem: Subsystem,
    pub zone: Zone,
    pub hours: f64,
}

/// One construction system to be allocated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemInput {
    pub name: String,
    pub rows: Vec<HoursRow>,
    /// Hardware mass attributed to each group.
    pub group_mass: BTreeMap<Group, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAllocation {
    pub group: Group,
    pub lambda: f64,
    pub baseline: f64,
    pub goal: f64,
    pub cost_factor: f64,
    pub mass_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationReport {
    pub system: String,
    pub norm_lambda: f64,
    pub total_lambda: f64,
    pub baseline: f64,
    pub goal: f64,
    pub groups: Vec<GroupAllocation>,
    pub cost_factor: f64,
}

/// Runs the allocation for every system. Time ratings are normalized over
/// the longest row of any system, and the normalization constant over the
/// most reliable system.
pub fn allocate(
    systems: &[SystemInput],
    ratings: &RatingTable,
    target: f64,
    feasibility: f64,
) -> Result<Vec<AllocationReport>, ModelError> {
    let all_hours: Vec<f64> = systems.iter().flat_map(|s| s.rows.iter().map(|r| r.hours)).collect();
    let max = all_hours.iter().cloned().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(ModelError::Domain {
            what: "maximum operating hours",
            value: max,
        });
    }

    let mut lambdas: Vec<BTreeMap<Group, f64>> = Vec::with_capacity(systems.len());
    for s in systems {
        let mut m = BTreeMap::new();
        for row in &s.rows {
            let lam = relative_failure_rate(&ratings.get(row.subsystem)?, 10.0 * row.hours / max);
            *m.entry(Group::of(row.subsystem)).or_insert(0.0) += lam;
        }
        lambdas.push(m);
    }
    let totals: Vec<f64> = lambdas.iter().map(|m| m.values().sum()).collect();
    let norm = normalize_lambda(&totals, target);

    let mut out = Vec::with_capacity(systems.len());
    for ((s, lam), total) in systems.iter().zip(&lambdas).zip(&totals) {
        let groups: Vec<Group> = lam.keys().copied().collect();
        let base: Vec<f64> = groups.iter().map(|g| baseline_reliability(lam[g], norm)).collect();
        let goals = minimize_effort(&base, target);

        let mass_total: f64 = s.group_mass.values().sum();
        let fraction = |g: Group| {
            if mass_total > 0.0 {
                s.group_mass.get(&g).copied().unwrap_or(0.0) / mass_total
            } else {
                0.0
            }
        };
        let mut allocs = Vec::with_capacity(groups.len());
        let mut weighted = Vec::new();
        for (i, &g) in groups.iter().enumerate() {
            let c = mettas_cost(goals[i], base[i], feasibility)?;
            let phi = fraction(g);
            weighted.push((phi, c));
            allocs.push(GroupAllocation {
                group: g,
                lambda: lam[&g],
                baseline: base[i],
                goal: goals[i],
                cost_factor: c,
                mass_fraction: phi,
            });
        }
        // Mass in groups without operating hours carries no reliability premium.
        for (&g, _) in s.group_mass.iter().filter(|(g, _)| !lam.contains_key(g)) {
            weighted.push((fraction(g), 1.0));
        }
        let cost_factor = if mass_total > 0.0 {
            system_cost_factor(&weighted)?
        } else {
            1.0
        };
        out.push(AllocationReport {
            system: s.name.clone(),
            norm_lambda: norm,
            total_lambda: *total,
            baseline: base.iter().product(),
            goal: goals.iter().product(),
            groups: allocs,
            cost_factor,
        });
    }
    Ok(out)
}

/// Group owning each attachment's mass. The oven is shared evenly between
/// baking and the robotics that load and unload it.
pub fn equipment_groups(e: Equipment) -> &'static [(Group, f64)] {
    match e {
        Equipment::GradingBlade | Equipment::Compactor => &[(Group::RoverOperations, 1.0)],
        Equipment::Magnetrons => &[(Group::Sintering, 1.0)],
        Equipment::Oven => &[(Group::Baking, 0.5), (Group::OvenRobotics, 0.5)],
        Equipment::InstallArm => &[(Group::LayingPavers, 1.0)],
        Equipment::Excavator => &[(Group::Excavating, 1.0)],
        Equipment::Rake => &[(Group::RakingSorting, 1.0)],
        Equipment::RockLayer => &[(Group::LayingRock, 1.0)],
        Equipment::Sprayer => &[(Group::PolymerApplication, 1.0)],
    }
}

/// Hardware mass ledger of a plan by allocation group. Rover mass is shared
/// equally by every group that logs operating hours.
pub fn group_masses(plan: &CombinedPlan) -> BTreeMap<Group, f64> {
    let mut m = BTreeMap::new();
    for (&e, &kg) in &plan.attachments {
        for &(g, share) in equipment_groups(e) {
            *m.entry(g).or_insert(0.0) += kg * share;
        }
    }
    let active: BTreeSet<Group> = plan
        .subsystem_hours
        .iter()
        .filter(|r| r.hours > 0.0)
        .map(|r| Group::of(r.subsystem))
        .collect();
    let rovers = plan.rover_mass_kg();
    if active.is_empty() {
        *m.entry(Group::RoverOperations).or_insert(0.0) += rovers;
    } else {
        for g in &active {
            *m.entry(*g).or_insert(0.0) += rovers / active.len() as f64;
        }
    }
    m
}
