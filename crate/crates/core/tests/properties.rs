use approx::assert_relative_eq;
use proptest::prelude::*;

use padtrade::costing::{build_plan, cost_breakdown, program_delay_cost, Case, EconomicScenario, ScaleSet};
use padtrade::gravel::{gravel_process, rock_class_plans};
use padtrade::optimizer::{calendar_days, Constraints, Model, Objective};
use padtrade::params::{derive_geometry, load_parameters, ParameterSet, Zone, KEYS};
use padtrade::pavers::{baking_energy, paver_total_time, PaverStreams};
use padtrade::polymer::polymer_process;
use padtrade::reliability::{baseline_reliability, mettas_cost, minimize_effort, normalize_lambda};
use padtrade::sintering::{simulate_microwave_column_with, sinter_zone, MaterialModel, SimOptions};
use padtrade::siteprep::{compact_scaled, grade_scaled};

fn case_strategy() -> impl Strategy<Value = Case> {
    prop::sample::select(Case::ALL.to_vec())
}

fn zone_strategy() -> impl Strategy<Value = Zone> {
    prop::sample::select(Zone::BOTH.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trip(transport in 0.0..2000.0f64, rover in 10.0..1000.0f64, r_in in 1.0..30.0f64, extra in 0.5..20.0f64) {
        let text = format!(
            r#"{{"transport_cost_k_per_kg": {transport}, "rover_mass_kg": {rover}, "inner_radius_m": {r_in}, "outer_radius_m": {}}}"#,
            r_in + extra
        );
        let p = load_parameters(&text).unwrap();
        let q = load_parameters(&p.to_config_string()).unwrap();
        for spec in KEYS {
            let (a, b) = (spec.internal_value(&p), spec.internal_value(&q));
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{}: {a} vs {b}", spec.key);
        }
        prop_assert_eq!(p.dev_cost_charging, q.dev_cost_charging);
    }

    #[test]
    fn doubling_radii_quadruples_areas(r_in in 1.0..50.0f64, extra in 0.5..50.0f64) {
        let mut p = ParameterSet {
            r_inner: r_in,
            r_outer: r_in + extra,
            ..ParameterSet::default()
        };
        let g = derive_geometry(&p);
        p.r_inner *= 2.0;
        p.r_outer *= 2.0;
        let h = derive_geometry(&p);
        assert_relative_eq!(h.inner_area, 4.0 * g.inner_area, max_relative = 1e-12);
        assert_relative_eq!(h.outer_area, 4.0 * g.outer_area, max_relative = 1e-12);
    }

    #[test]
    fn siteprep_linear_in_area(zone in zone_strategy(), scale in 0.05..20.0f64, k in 1.1..4.0f64) {
        let mut p = ParameterSet::default();
        let g = derive_geometry(&p);
        p.r_inner *= k.sqrt();
        p.r_outer *= k.sqrt();
        let h = derive_geometry(&p);
        let p0 = ParameterSet::default();
        for (a, b) in [
            (grade_scaled(zone, scale, &p0, &g), grade_scaled(zone, scale, &p, &h)),
            (compact_scaled(zone, scale, &p0, &g), compact_scaled(zone, scale, &p, &h)),
        ] {
            assert_relative_eq!(b.time_days, k * a.time_days, max_relative = 1e-9);
            assert_relative_eq!(b.energy_mwh, k * a.energy_mwh, max_relative = 1e-9);
            assert_relative_eq!(b.hardware_mass_kg, a.hardware_mass_kg, max_relative = 1e-12);
        }
    }

    #[test]
    fn sinter_energy_independent_of_power(zone in zone_strategy(), kw in 1.0..2000.0f64, k in 1.1..10.0f64) {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        let a = sinter_zone(zone, kw, &p, &g);
        let b = sinter_zone(zone, kw * k, &p, &g);
        assert_relative_eq!(a.energy_mwh, b.energy_mwh, max_relative = 1e-12);
        assert_relative_eq!(a.time_days * kw, b.time_days * kw * k, max_relative = 1e-12);
        prop_assert!(b.hardware_mass_kg >= a.hardware_mass_kg);
    }

    #[test]
    fn baking_energy_linear_in_mass(m in 0.0..1e6f64, k in 0.0..10.0f64) {
        let p = ParameterSet::default();
        assert_relative_eq!(baking_energy(m * k, &p), k * baking_energy(m, &p), max_relative = 1e-12, epsilon = 1e-9);
    }

    #[test]
    fn pipeline_between_longest_stream_and_sum(
        e in 0.0..1e6f64, b in 0.0..1e6f64, i in 0.0..1e6f64, gc in 0.0..1e6f64, n in 1u64..500
    ) {
        let s = PaverStreams { excavate_haul_s: e, bake_s: b, prep_install_s: gc + i, install_s: i };
        let t = paver_total_time(&s, n);
        let longest = e.max(b).max(i);
        prop_assert!(t >= longest * (1.0 - 1e-12) - 1e-9, "{t} < {longest}");
        prop_assert!(t <= (e + b + gc + i) * (1.0 + 1e-12) + 1e-9);
    }

    #[test]
    fn doubling_scale_never_increases_time(case in case_strategy(), m in 0.05..50.0f64) {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        let s = ScaleSet::nominal(&p).times(m);
        let a = build_plan(case, &s, &p, &g);
        let b = build_plan(case, &s.times(2.0), &p, &g);
        prop_assert!(b.time_days <= a.time_days * (1.0 + 1e-12));
    }

    #[test]
    fn plan_invariants(case in case_strategy(), m in 0.01..100.0f64) {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        let plan = build_plan(case, &ScaleSet::nominal(&p).times(m), &p, &g);
        let t: f64 = plan.phases.iter().map(|r| r.time_days).sum();
        let e: f64 = plan.phases.iter().map(|r| r.energy_mwh).sum();
        assert_relative_eq!(plan.time_days, t, max_relative = 1e-12);
        assert_relative_eq!(plan.energy_mwh, e, max_relative = 1e-12);
        let naive: f64 = plan.phases.iter().map(|r| r.hardware_mass_kg).sum();
        prop_assert!(plan.hardware_mass_kg <= naive * (1.0 + 1e-12));
        for r in &plan.phases {
            prop_assert!(r.time_days >= 0.0 && r.energy_mwh >= 0.0 && r.consumable_mass_kg >= 0.0);
            prop_assert!(r.energy_mwh <= r.peak_power_kw * r.time_days * 24.0 / 1000.0 * (1.0 + 1e-9) + 1e-12,
                "{:?}: average above peak", r.process);
            prop_assert!(plan.peak_power_kw >= r.peak_power_kw);
            prop_assert!(plan.fleet_rovers >= r.rover_count);
        }
    }

    #[test]
    fn gravel_classes_add_up(scale in 0.1..20.0f64) {
        let p = ParameterSet::default();
        let classes = rock_class_plans(&p);
        let fwd: f64 = classes.iter().map(|c| c.energy_j).sum();
        let rev: f64 = classes.iter().rev().map(|c| c.energy_j).sum();
        assert_relative_eq!(fwd, rev, max_relative = 1e-12);
        let g = derive_geometry(&p);
        let r = gravel_process(scale, &p, &g);
        prop_assert!(r.energy_mwh * 3.6e9 >= fwd);
    }

    #[test]
    fn polymer_consumable_invariant_under_scale(zone in zone_strategy(), a in 0.05..20.0f64, b in 0.05..20.0f64) {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        let x = polymer_process(zone, a, &p, &g);
        let y = polymer_process(zone, b, &p, &g);
        assert_relative_eq!(x.consumable_mass_kg, y.consumable_mass_kg, max_relative = 1e-12);
    }

    #[test]
    fn appropriated_at_most_total(case in case_strategy(), m in 0.01..100.0f64, transport in 0.0..2000.0f64) {
        let p = ParameterSet::default().with("transport_cost_k_per_kg", transport).unwrap();
        let g = derive_geometry(&p);
        let plan = build_plan(case, &ScaleSet::nominal(&p).times(m), &p, &g);
        let c = cost_breakdown(&plan, &EconomicScenario::from_params(&p), 1.2);
        prop_assert!(c.appropriated <= c.total + 1e-12);
        for v in [c.transport, c.development, c.delay, c.energy, c.operations] {
            prop_assert!(v >= 0.0);
        }
        assert_relative_eq!(c.total, c.transport + c.development + c.delay + c.energy + c.operations, max_relative = 1e-12);
    }

    #[test]
    fn delay_linear_in_days_and_multiple(days in 0.0..1000.0f64, k in 0.0..10.0f64, mult in 0.0..50.0f64) {
        let mut s = EconomicScenario::from_params(&ParameterSet::default());
        let base = program_delay_cost(days, &s);
        assert_relative_eq!(program_delay_cost(days * k, &s), k * base, max_relative = 1e-12, epsilon = 1e-12);
        let d1 = program_delay_cost(days, &s) / s.value_multiple;
        s.value_multiple = mult;
        assert_relative_eq!(program_delay_cost(days, &s), mult * d1, max_relative = 1e-12, epsilon = 1e-12);
    }

    #[test]
    fn costs_monotone_in_mass_days_energy(case in case_strategy(), m in 0.05..20.0f64, bump in 0.0..1e4f64) {
        let p = ParameterSet::default();
        let g = derive_geometry(&p);
        let s = EconomicScenario::from_params(&p);
        let plan = build_plan(case, &ScaleSet::nominal(&p).times(m), &p, &g);
        let base = cost_breakdown(&plan, &s, 1.0);
        let mut heavier = plan.clone();
        heavier.consumable_mass_kg += bump;
        prop_assert!(cost_breakdown(&heavier, &s, 1.0).transport >= base.transport);
        let mut longer = plan.clone();
        longer.time_days += bump / 100.0;
        let l = cost_breakdown(&longer, &s, 1.0);
        prop_assert!(l.delay >= base.delay && l.operations >= base.operations);
        let mut hungrier = plan;
        hungrier.energy_mwh += bump;
        prop_assert!(cost_breakdown(&hungrier, &s, 1.0).energy >= base.energy);
    }

    #[test]
    fn minimize_effort_meets_target(base in prop::collection::vec(0.5..0.99999f64, 1..12), target in 0.5..0.999f64) {
        let goals = minimize_effort(&base, target);
        prop_assert_eq!(goals.len(), base.len());
        for (g, b) in goals.iter().zip(&base) {
            prop_assert!(*g >= *b - 1e-12);
        }
        let product: f64 = base.iter().product();
        let achieved: f64 = goals.iter().product();
        if product < target {
            assert_relative_eq!(achieved, target, max_relative = 1e-9);
        } else {
            prop_assert_eq!(goals, base);
        }
    }

    #[test]
    fn mettas_monotone_and_at_least_one(r_min in 0.0..0.999f64, a in 0.0..1.0f64, b in 0.0..1.0f64, f in 0.0..1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let g1 = r_min + (1.0 - r_min) * lo;
        let g2 = r_min + (1.0 - r_min) * hi;
        let c1 = mettas_cost(g1, r_min, f).unwrap();
        let c2 = mettas_cost(g2, r_min, f).unwrap();
        prop_assert!(c1 >= 1.0 && c2 >= c1);
        prop_assert!(mettas_cost(r_min - 0.01, r_min, f).is_err() || r_min < 0.01);
    }

    #[test]
    fn least_failure_system_sits_at_target(totals in prop::collection::vec(0.1..1e4f64, 1..9), target in 0.5..0.999f64) {
        let norm = normalize_lambda(&totals, target);
        let min = totals.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_relative_eq!(baseline_reliability(min, norm), target, max_relative = 1e-12);
        for t in &totals {
            prop_assert!(baseline_reliability(*t, norm) <= target * (1.0 + 1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn temperature_profile_never_rises_with_depth(flux in 20.0..500.0f64, depth_mm in 1u32..15) {
        let m = MaterialModel::default();
        let opts = SimOptions { column_depth_m: 0.05, max_steps: 100_000 };
        let mut ok = true;
        let r = simulate_microwave_column_with(flux, &m, depth_mm as f64 / 1000.0, 0.3, 1e-3, opts, |_, t| {
            ok &= t.windows(2).all(|w| w[1] <= w[0] + 1e-9);
        })
        .unwrap();
        prop_assert!(ok);
        prop_assert!(r.max_balance_error < 1e-9);
    }

    #[test]
    fn optimum_no_worse_than_nominal(case in case_strategy(), transport in 10.0..1000.0f64) {
        let model = Model::new(ParameterSet::default().with("transport_cost_k_per_kg", transport).unwrap()).unwrap();
        let (_, nominal) = model.evaluate_at_scale(case, &model.nominal_scales());
        let o = model.optimize_scale(case, &Constraints::default());
        prop_assert!(o.feasible);
        prop_assert!(o.cost.total <= nominal.total * (1.0 + 1e-12));
    }

    #[test]
    fn constrained_optimum_respects_ceilings(case in case_strategy(), days in 30.0..600.0f64, kw in 5.0..200.0f64) {
        let model = Model::new(ParameterSet::default()).unwrap();
        let c = Constraints { max_days: Some(days), max_peak_kw: Some(kw), objective: Objective::Appropriated };
        let o = model.optimize_scale(case, &c);
        if o.feasible {
            prop_assert!(calendar_days(&o.plan, model.params.duty_cycle) <= days * (1.0 + 1e-12));
            prop_assert!(o.plan.peak_power_kw <= kw * (1.0 + 1e-12));
        }
    }
}

#[test]
fn optimum_mass_falls_as_transport_rises() {
    let model = Model::new(ParameterSet::default()).unwrap();
    let rates = padtrade::optimizer::sweep_rates(10.0, 3000.0, 12);
    for case in [Case::SiSi, Case::PaPa, Case::SiPo] {
        let masses: Vec<f64> = rates
            .iter()
            .map(|&r| {
                let o = model
                    .with_transport(r)
                    .unwrap()
                    .optimize_scale(case, &Constraints::default());
                o.plan.mass_from_earth_kg()
            })
            .collect();
        for w in masses.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-9), "{case:?}: {masses:?}");
        }
    }
}

#[test]
fn single_point_sweep_matches_optimize() {
    let model = Model::new(ParameterSet::default()).unwrap();
    let c = Constraints::default();
    let pts = model.sweep_transport(&[Case::PaGr], 150.0, 150.0, 1, &c).unwrap();
    assert_eq!(pts.len(), 1);
    let direct = model.with_transport(150.0).unwrap().optimize_scale(Case::PaGr, &c);
    assert_eq!(pts[0].optimum.scales, direct.scales);
    assert_eq!(pts[0].optimum.cost, direct.cost);
}

#[test]
fn free_construction_ties_at_zero() {
    let text = r#"{"transport_cost_k_per_kg": 0, "dev_cost_rate_m_per_kg": 0, "pad_ops_cost_m_per_yr": 0,
        "reprogrammable_fraction_pct": 100, "solar_mass_to_power_kg_per_kw": 0}"#;
    let model = Model::new(load_parameters(text).unwrap()).unwrap();
    let ranked = model.rank_cases(&Constraints::default());
    assert_eq!(ranked.len(), 8);
    for o in &ranked {
        assert!(o.feasible);
        assert_eq!(o.cost.total, 0.0, "{:?}", o.case);
    }
}

#[test]
fn impossible_schedule_is_flagged() {
    let model = Model::new(ParameterSet::default()).unwrap();
    let c = Constraints {
        max_days: Some(0.001),
        ..Constraints::default()
    };
    for o in model.rank_cases(&c) {
        assert!(!o.feasible, "{:?}", o.case);
    }
    assert!(Constraints {
        max_days: Some(0.0),
        ..Constraints::default()
    }
    .validate()
    .is_err());
}
