//! Scale optimization: per-case search for the hardware scale that minimizes
//! total or appropriated cost, optionally under schedule and power ceilings.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::costing::{build_plan, cost_breakdown, Case, CombinedPlan, CostBreakdown, EconomicScenario, Knob, ScaleSet};
use crate::error::{Error, ModelError};
use crate::params::{derive_geometry, PadGeometry, ParameterSet};
use crate::reliability::{allocate, group_masses, AllocationReport, RatingTable, SystemInput};

/// Search span relative to the nominal scale.
pub const SPAN: (f64, f64) = (1e-2, 1e3);
pub const TRANSPORT_KEY: &str = "transport_cost_k_per_kg";
const GRID_POINTS: usize = 200;
const MAX_SWEEPS: usize = 8;
const GOLDEN_ITERS: usize = 60;
const BISECT_ITERS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Total,
    Appropriated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraints {
    /// Calendar days: working days divided by the solar duty cycle.
    pub max_days: Option<f64>,
    pub max_peak_kw: Option<f64>,
    pub objective: Objective,
}

impl Default for Constraints {
    fn default() -> Self {
        Self {
            max_days: None,
            max_peak_kw: None,
            objective: Objective::Total,
        }
    }
}

impl Constraints {
    pub fn validate(&self) -> Result<(), ModelError> {
        for v in [self.max_days, self.max_peak_kw].into_iter().flatten() {
            if !(v > 0.0) {
                return Err(ModelError::Domain {
                    what: "constraint ceiling",
                    value: v,
                });
            }
        }
        Ok(())
    }

    pub fn admits(&self, plan: &CombinedPlan, duty_cycle: f64) -> bool {
        self.max_days.is_none_or(|d| calendar_days(plan, duty_cycle) <= d)
            && self.max_peak_kw.is_none_or(|k| plan.peak_power_kw <= k)
    }

    pub fn objective_of(&self, c: &CostBreakdown) -> f64 {
        match self.objective {
            Objective::Total => c.total,
            Objective::Appropriated => c.appropriated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub case: Case,
    pub scales: ScaleSet,
    pub plan: CombinedPlan,
    pub cost: CostBreakdown,
    pub objective: f64,
    pub feasible: bool,
}

/// Parameters, derived geometry and per-case reliability factors.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: ParameterSet,
    pub geometry: PadGeometry,
    pub scenario: EconomicScenario,
    pub reliability: Vec<AllocationReport>,
    ratings: RatingTable,
    factors: BTreeMap<Case, f64>,
}

impl Model {
    pub fn new(params: ParameterSet) -> Result<Self, ModelError> {
        Self::with_ratings(params, &RatingTable::default())
    }

    /// Reliability factors are allocated once from the nominal plans and
    /// held fixed while scales are optimized.
    pub fn with_ratings(params: ParameterSet, ratings: &RatingTable) -> Result<Self, ModelError> {
        let geometry = derive_geometry(&params);
        let nominal = ScaleSet::nominal(&params);
        let systems: Vec<SystemInput> = Case::ALL
            .iter()
            .map(|&c| {
                let plan = build_plan(c, &nominal, &params, &geometry);
                SystemInput {
                    name: c.as_str().to_string(),
                    rows: plan.subsystem_hours.clone(),
                    group_mass: group_masses(&plan),
                }
            })
            .collect();
        let reliability = allocate(
            &systems,
            ratings,
            params.reliability_target,
            params.reliability_feasibility,
        )?;
        let factors = Case::ALL
            .iter()
            .zip(&reliability)
            .map(|(&c, r)| (c, r.cost_factor))
            .collect();
        Ok(Self {
            scenario: EconomicScenario::from_params(&params),
            params,
            geometry,
            reliability,
            ratings: ratings.clone(),
            factors,
        })
    }

    pub fn reliability_factor(&self, case: Case) -> f64 {
        self.factors[&case]
    }

    pub fn nominal_scales(&self) -> ScaleSet {
        ScaleSet::nominal(&self.params)
    }

    pub fn evaluate_at_scale(&self, case: Case, scales: &ScaleSet) -> (CombinedPlan, CostBreakdown) {
        let plan = build_plan(case, scales, &self.params, &self.geometry);
        let cost = cost_breakdown(&plan, &self.scenario, self.reliability_factor(case));
        (plan, cost)
    }

    fn score(&self, case: Case, scales: &ScaleSet, c: &Constraints) -> Score {
        let (plan, cost) = self.evaluate_at_scale(case, scales);
        let feasible = c.admits(&plan, self.params.duty_cycle);
        Score {
            value: if feasible { c.objective_of(&cost) } else { f64::INFINITY },
            regime: (plan.fleet_rovers, feasible),
        }
    }

    pub fn optimize_scale(&self, case: Case, c: &Constraints) -> Optimum {
        let nominal = self.nominal_scales();
        let knobs = case.knobs();

        // Common multiplier on every knob first.
        let (m, mut best) = minimize_1d(SPAN.0, SPAN.1, |m| self.score(case, &nominal.times(m), c));
        let mut x = nominal.times(m);

        for _ in 0..MAX_SWEEPS {
            let before = best.value;
            for &k in &knobs {
                let n = nominal.get(k);
                let (v, s) = minimize_1d(SPAN.0 * n, SPAN.1 * n, |v| {
                    let mut y = x;
                    y.set(k, v);
                    self.score(case, &y, c)
                });
                if better(&s, v, &best, x.get(k)) {
                    x.set(k, v);
                    best = s;
                }
            }
            if !(best.value < before * (1.0 - 1e-12)) {
                break;
            }
        }
        // Knobs the case does not use go back to nominal.
        for k in Knob::ALL {
            if !knobs.contains(&k) {
                x.set(k, nominal.get(k));
            }
        }
        let (plan, cost) = self.evaluate_at_scale(case, &x);
        let feasible = c.admits(&plan, self.params.duty_cycle);
        Optimum {
            case,
            scales: x,
            objective: c.objective_of(&cost),
            plan,
            cost,
            feasible,
        }
    }

    /// Optimizes every case and sorts by objective. Infeasible cases sort last.
    pub fn rank_cases(&self, c: &Constraints) -> Vec<Optimum> {
        let mut out: Vec<Optimum> = Case::ALL.par_iter().map(|&case| self.optimize_scale(case, c)).collect();
        out.sort_by(|a, b| {
            b.feasible
                .cmp(&a.feasible)
                .then(a.objective.total_cmp(&b.objective))
                .then(a.case.cmp(&b.case))
        });
        out
    }

    /// Optimum per case at each value of a numeric config key, values spaced
    /// as by [`sweep_rates`]. Output is ordered by value, then by `cases`.
    pub fn sweep_param(
        &self,
        key: &str,
        cases: &[Case],
        from: f64,
        to: f64,
        points: usize,
        c: &Constraints,
    ) -> Result<Vec<SweepPoint>, Error> {
        let values = sweep_rates(from, to, points);
        let models: Vec<Model> = values
            .iter()
            .map(|&v| self.with_param(key, v))
            .collect::<Result<_, _>>()?;
        Ok(values
            .par_iter()
            .zip(models.par_iter())
            .flat_map_iter(|(&value, m)| {
                cases.iter().map(move |&case| SweepPoint {
                    value,
                    optimum: m.optimize_scale(case, c),
                })
            })
            .collect())
    }

    pub fn sweep_transport(
        &self,
        cases: &[Case],
        from: f64,
        to: f64,
        points: usize,
        c: &Constraints,
    ) -> Result<Vec<SweepPoint>, Error> {
        self.sweep_param(TRANSPORT_KEY, cases, from, to, points, c)
    }

    /// Rebuilt model with one config key changed.
    pub fn with_param(&self, key: &str, value: f64) -> Result<Model, Error> {
        Ok(Model::with_ratings(self.params.with(key, value)?, &self.ratings)?)
    }

    pub fn with_transport(&self, rate_k_per_kg: f64) -> Result<Model, Error> {
        self.with_param(TRANSPORT_KEY, rate_k_per_kg)
    }

    pub fn transport_cost_k_per_kg(&self) -> f64 {
        ParameterSet::key_spec(TRANSPORT_KEY)
            .expect("transport key exists")
            .config_value(&self.params)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub optimum: Optimum,
}

pub fn calendar_days(plan: &CombinedPlan, duty_cycle: f64) -> f64 {
    plan.time_days / duty_cycle
}

/// `points` rates from `from` to `to`, geometric when both are positive.
pub fn sweep_rates(from: f64, to: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![from];
    }
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            if from > 0.0 && to > 0.0 {
                from * (to / from).powf(t)
            } else {
                from + (to - from) * t
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Score {
    value: f64,
    /// Fleet size and feasibility; the objective is smooth within a regime.
    regime: (u32, bool),
}

fn better(a: &Score, xa: f64, b: &Score, xb: f64) -> bool {
    a.value < b.value || (a.value == b.value && xa < xb)
}

/// Geometric grid over [lo, hi], then golden-section refinement in log scale
/// on each smooth piece of the best bracket.
fn minimize_1d<F>(lo: f64, hi: f64, f: F) -> (f64, Score)
where
    F: Fn(f64) -> Score + Sync,
{
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / (GRID_POINTS - 1) as f64;
    let xs: Vec<f64> = (0..GRID_POINTS).map(|i| llo + step * i as f64).collect();
    let scores: Vec<Score> = xs.par_iter().map(|&u| f(u.exp())).collect();

    let mut bi = 0;
    for i in 1..xs.len() {
        if scores[i].value < scores[bi].value {
            bi = i;
        }
    }
    let mut best = (xs[bi], scores[bi]);
    if !scores[bi].value.is_finite() {
        return (best.0.exp(), best.1);
    }

    let g = |u: f64| f(u.exp());
    let a = if bi > 0 { xs[bi - 1] } else { xs[bi] };
    let b = if bi + 1 < xs.len() { xs[bi + 1] } else { xs[bi] };
    let mut cuts = vec![a];
    split_regimes(&g, a, g(a), b, g(b), &mut cuts);
    cuts.push(b);
    for w in cuts.windows(2) {
        let (u, s) = golden(&g, w[0], w[1]);
        if better(&s, u, &best.1, best.0) {
            best = (u, s);
        }
    }
    (best.0.exp(), best.1)
}

/// Appends the points in (a, b) where the regime changes, in order. Each
/// boundary is reported on both sides so adjacent pieces stay smooth.
fn split_regimes<G: Fn(f64) -> Score>(g: &G, a: f64, sa: Score, b: f64, sb: Score, cuts: &mut Vec<f64>) {
    if sa.regime == sb.regime || b - a < 1e-12 {
        return;
    }
    let (mut l, mut r) = (a, b);
    for _ in 0..BISECT_ITERS {
        let m = 0.5 * (l + r);
        if g(m).regime == sa.regime {
            l = m;
        } else {
            r = m;
        }
    }
    cuts.push(l);
    cuts.push(r);
    split_regimes(g, r, g(r), b, sb, cuts);
}

fn golden<G: Fn(f64) -> Score>(g: &G, a: f64, b: f64) -> (f64, Score) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut best = {
        let (sa, sb) = (g(a), g(b));
        if better(&sa, a, &sb, b) {
            (a, sa)
        } else {
            (b, sb)
        }
    };
    if b - a < 1e-12 {
        return best;
    }
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut sc = g(c);
    let mut sd = g(d);
    for _ in 0..GOLDEN_ITERS {
        if better(&sc, c, &sd, d) {
            b = d;
            d = c;
            sd = sc;
            c = b - inv_phi * (b - a);
            sc = g(c);
        } else {
            a = c;
            c = d;
            sc = sd;
            d = a + inv_phi * (b - a);
            sd = g(d);
        }
    }
    for (u, s) in [(c, sc), (d, sd)] {
        if better(&s, u, &best.1, best.0) {
            best = (u, s);
        }
    }
    best
}
