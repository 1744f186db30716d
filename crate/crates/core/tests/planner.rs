use leopnt::bands::Band;
use leopnt::constants::SPEED_OF_LIGHT;
use leopnt::planner::*;
use leopnt::Error;
use proptest::prelude::{any, prop_assert, prop_oneof, proptest, Just, ProptestConfig};
use proptest::strategy::Strategy as _;

fn cal() -> Calibration {
    Calibration::builtin()
}

fn cold(env: Environment, strategy: Option<Strategy>) -> Scenario {
    Scenario { phase: Phase::ColdStart, environment: env, strategy, prn_state: PrnState::NewPrn }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Length of [-limit, limit] minus the union of `exclusions`.
fn free_length(limit: f64, exclusions: &[(f64, f64)]) -> f64 {
    let mut covered = 0.0;
    for &(a, b) in exclusions {
        let (lo, hi) = (a.max(-limit), b.min(limit));
        if hi > lo {
            covered += hi - lo;
        }
    }
    2.0 * limit - covered
}

fn check_invariants(plan: &SearchPlan) {
    let mut sorted = plan.bins.clone();
    sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    for w in sorted.windows(2) {
        assert!(w[0].hi <= w[1].lo + 1e-9, "overlap {:?} {:?}", w[0], w[1]);
    }
    for b in &plan.bins {
        assert!(b.center.abs() <= plan.f_limit + 1e-9);
        // a descending plan centres its first bin on the limit
        let slack = 0.5 * plan.bin_width + 1e-9;
        assert!(b.lo >= -plan.f_limit - slack && b.hi <= plan.f_limit + slack);
        assert!(b.width() > 0.0 && b.width() <= plan.bin_width + 1e-9);
        for &(a, e) in &plan.exclusions {
            assert!(!(b.center >= a && b.center <= e), "center {} inside exclusion", b.center);
            assert!(b.hi <= a + 1e-9 || b.lo >= e - 1e-9, "bin {:?} intersects exclusion", b);
        }
    }
    let lim = plan.f_limit;
    let total: f64 = plan.bins.iter().map(|b| (b.hi.min(lim) - b.lo.max(-lim)).max(0.0)).sum();
    assert!((total - free_length(plan.f_limit, &plan.exclusions)).abs() < 1e-6 * plan.f_limit.max(1.0));
}

#[test]
fn cold_open_sky_starts_at_table_limit() {
    let plan = plan_doppler(&cold(Environment::OpenSky, None), Band::X1, OrbitClass::Inclined, PlanOptions::new(500.0), &cal())
        .unwrap();
    assert_eq!(plan.strategy, Strategy::LargePositiveFirst);
    let first = plan.bins[0].center;
    assert!(rel(first, 31813.4) < 0.003, "first bin {first}");
    assert!(plan.bins.windows(2).all(|w| w[0].center > w[1].center));
    assert_eq!(plan.bins.last().unwrap().lo, -plan.f_limit);
    check_invariants(&plan);
}

#[test]
fn urban_limits_follow_mask() {
    // The printed urban anchors are the polar-shell envelope.
    let lpf = plan_doppler(
        &cold(Environment::Urban { mask: 30.0 }, Some(Strategy::LargePositiveFirst)),
        Band::X1,
        OrbitClass::Polar,
        PlanOptions::new(500.0),
        &cal(),
    )
    .unwrap();
    assert!(rel(lpf.bins[0].center, 29e3) < 0.03, "{}", lpf.bins[0].center);

    let open = plan_doppler(&cold(Environment::OpenSky, None), Band::X1, OrbitClass::Polar, PlanOptions::new(500.0), &cal())
        .unwrap();
    assert!(rel(open.f_limit, 33628.5) < 0.003);
    assert!(lpf.f_limit < open.f_limit);

    let hef = plan_doppler(
        &cold(Environment::Urban { mask: 70.0 }, Some(Strategy::HighElevationFirst)),
        Band::X1,
        OrbitClass::Polar,
        PlanOptions::new(500.0),
        &cal(),
    )
    .unwrap();
    assert!(rel(hef.f_limit, 12e3) < 0.05, "{}", hef.f_limit);
    assert!(hef.bins.iter().all(|b| b.lo.abs() <= hef.f_limit && b.hi.abs() <= hef.f_limit));
    assert_eq!(hef.bins[0].center, 0.0);
    check_invariants(&hef);
}

#[test]
fn operation_new_prn_searches_outward_from_zero() {
    let s = Scenario {
        phase: Phase::Operation,
        environment: Environment::OpenSky,
        strategy: None,
        prn_state: PrnState::NewPrn,
    };
    let plan = plan_doppler(&s, Band::X5, OrbitClass::Inclined, PlanOptions::new(250.0), &cal()).unwrap();
    assert_eq!(plan.strategy, Strategy::ZeroFirst);
    assert!(plan.bins.windows(2).all(|w| w[0].center.abs() <= w[1].center.abs()));
    // positive side first for equal magnitudes
    assert!(plan.bins[1].center > 0.0 && plan.bins[2].center == -plan.bins[1].center);
    check_invariants(&plan);

    let urban = Scenario { environment: Environment::Urban { mask: 20.0 }, ..s };
    let plan = plan_doppler(&urban, Band::X5, OrbitClass::Inclined, PlanOptions::new(250.0), &cal()).unwrap();
    assert_eq!(plan.strategy, Strategy::LargePositiveFirst);
}

#[test]
fn tracked_doppler_is_excluded() {
    let s = Scenario {
        phase: Phase::Operation,
        environment: Environment::OpenSky,
        strategy: None,
        prn_state: PrnState::Tracked(vec![10e3]),
    };
    let opts = PlanOptions { exclusion_half_width: Some(500.0), ..PlanOptions::new(100.0) };
    let plan = plan_doppler(&s, Band::X1, OrbitClass::Inclined, opts, &cal()).unwrap();
    assert!(plan.bins.iter().all(|b| !(9.5e3..=10.5e3).contains(&b.center)));
    // a second satellite of the plane cannot be closer than the same-plane gap
    let gap = cal().class(OrbitClass::Inclined).unwrap().min_same_plane_doppler_diff(Band::X1, 0.0).unwrap();
    assert!(gap > 500.0);
    assert!(plan.bins.iter().all(|b| (b.center - 10e3).abs() > gap - 1e-9));
    assert!(!plan.removed.is_empty());
    check_invariants(&plan);
}

#[test]
fn inconsistent_scenarios_are_usage_errors() {
    let bad = [
        cold(Environment::OpenSky, Some(Strategy::HighElevationFirst)),
        Scenario { prn_state: PrnState::Tracked(vec![]), ..cold(Environment::OpenSky, None) },
        cold(Environment::Urban { mask: 95.0 }, None),
    ];
    for s in bad {
        let e = plan_doppler(&s, Band::X1, OrbitClass::Inclined, PlanOptions::new(500.0), &cal()).unwrap_err();
        assert!(matches!(e, Error::Usage(_)), "{e:?}");
    }
    let e = plan_doppler(&cold(Environment::OpenSky, None), Band::X1, OrbitClass::Inclined, PlanOptions::new(0.0), &cal());
    assert!(matches!(e, Err(Error::Usage(_))));
}

#[test]
fn calibration_is_self_consistent() {
    let c = cal();
    for class in [OrbitClass::Inclined, OrbitClass::Polar, OrbitClass::Gps] {
        let cc = c.class(class).unwrap();
        let (b1, b5) = if class == OrbitClass::Gps { (Band::L1CA, Band::L5) } else { (Band::X1, Band::X5) };
        let r = cc.doppler_limit(b5, 0.0).unwrap() / cc.doppler_limit(b1, 0.0).unwrap();
        assert!((r - b5.carrier() / b1.carrier()).abs() < 1e-12);
        let mut last = f64::INFINITY;
        for el in (0..=90).step_by(5) {
            let l = cc.doppler_limit(b1, el as f64).unwrap();
            assert!(l <= last + 1e-9, "limit not non-increasing at {el}");
            last = l;
        }
        assert!(cc.doppler_limit(b1, 90.0).unwrap() < 1.0);
    }
    let mut buf = Vec::new();
    c.write_csv(&mut buf).unwrap();
    assert_eq!(Calibration::read_csv(buf.as_slice()).unwrap(), c);
}

#[test]
fn rate_envelope_shape() {
    let cc = cal();
    let env = RateEnvelope::from_calibration(Band::X1, cc.class(OrbitClass::Polar).unwrap()).unwrap();
    let (lo0, hi0) = env.query(0.0).unwrap();
    assert_eq!(hi0, env.guard);
    assert!(rel(-(lo0 + env.guard), 230.0) < 0.05, "{lo0}");
    let (lo, hi) = env.query(env.f_max).unwrap();
    assert!(lo >= -env.guard - env.margin * env.rate_max - 1e-9 && hi <= env.guard);
    assert!(env.query(env.f_max * 1.001).is_none());
    for k in 0..=100 {
        let f = env.f_max * k as f64 / 100.0;
        assert!(env.magnitude(f) >= 0.0 && env.magnitude(-f) == env.magnitude(f));
    }
}

#[test]
fn rate_envelope_refit_reaches_target() {
    let base = RateEnvelope::from_calibration(Band::X1, cal().class(OrbitClass::Inclined).unwrap()).unwrap();
    // samples above the calibrated parabola by a varying amount
    let samples: Vec<(f64, f64)> = (0..2000)
        .map(|i| {
            let f = base.f_max * (i as f64 / 1000.0 - 1.0) * 1.01;
            let rate = -base.rate_max * 1.1 * (1.0 - (f / (base.f_max * 1.01)).powi(2)) * ((i % 7) as f64 / 6.0);
            (f, rate)
        })
        .collect();
    assert!(base.containment(&samples) < 0.999);
    let fit = rate_envelope(base, &samples, 0.999).unwrap();
    assert!(fit.containment(&samples) >= 0.999);
    assert!(fit.f_max >= base.f_max);
    assert!(rate_envelope(base, &samples, 0.0).is_err());
}

#[test]
fn overlay_relative_counts() {
    let b = DelayBounds::pulsar();
    // independent oracle: Table 8 distance over c
    let dt0 = 2795.7e3 / SPEED_OF_LIGHT * 1e3;
    let d = overlay_delay_candidates(DelayMode::RelativeToTracked { mask: 0.0, sign: None }, &b).unwrap();
    match &d {
        OverlayDelays::Relative { max_delay_diff_ms, offsets_ms } => {
            assert!((max_delay_diff_ms - dt0).abs() < 1e-9);
            assert!((max_delay_diff_ms - 9.3).abs() < 0.05);
            assert_eq!(offsets_ms.len(), 19);
            assert_eq!(offsets_ms[..5], [0, 1, -1, 2, -2]);
            assert_eq!(offsets_ms.iter().map(|x| x.abs()).max(), Some(9));
            assert!(offsets_ms.windows(2).all(|w| w[0].abs() <= w[1].abs()));
        }
        other => panic!("{other:?}"),
    }
    let later = overlay_delay_candidates(
        DelayMode::RelativeToTracked { mask: 0.0, sign: Some(SignHint::rising_satellite()) },
        &b,
    )
    .unwrap();
    assert_eq!(later.values(), (0..=9).collect::<Vec<_>>().as_slice());
    let m20 = overlay_delay_candidates(DelayMode::RelativeToTracked { mask: 20.0, sign: Some(SignHint::Later) }, &b).unwrap();
    assert_eq!(m20.len(), 5);
    assert_eq!(*m20.values().last().unwrap(), 4);
    let e = overlay_delay_candidates(DelayMode::RelativeToTracked { mask: 25.0, sign: None }, &b).unwrap_err();
    assert!(matches!(e, Error::Coverage(_)));
}

#[test]
fn overlay_precise_time_window() {
    let b = DelayBounds::pulsar();
    let d = overlay_delay_candidates(DelayMode::PreciseTime { mask: 0.0, clock_uncertainty_ms: 0.0 }, &b).unwrap();
    let OverlayDelays::Absolute(w) = d else { panic!() };
    assert!((w.start_ms - 3.6).abs() < 0.05);
    assert!((w.end_ms - 13.0).abs() < 0.05);
    assert!((w.span_ms() - 9.4).abs() < 0.05);
    assert_eq!(w.candidates.first(), Some(&3));
    assert_eq!(w.candidates.last(), Some(&13));
    let wide = overlay_delay_candidates(DelayMode::PreciseTime { mask: 0.0, clock_uncertainty_ms: 2.0 }, &b).unwrap();
    assert_eq!(wide.len(), w.candidates.len() + 4);
    assert!(overlay_delay_candidates(DelayMode::PreciseTime { mask: 0.0, clock_uncertainty_ms: -1.0 }, &b).is_err());
}

#[test]
fn budgets_match_closed_forms() {
    // code Doppler from the X1 Doppler limit
    let f = cal().class(OrbitClass::Polar).unwrap().doppler_limit(Band::X1, 0.0).unwrap();
    let code = carrier_to_code(Band::X1, f);
    assert_eq!((code * 10.0).round() / 10.0, 21.6);
    let paper_code = 21.6;
    for (chips, ms) in [(1.0, 46.3), (0.5, 23.1), (0.25, 11.6)] {
        let t = time_for_shift(paper_code, chips).unwrap().seconds().unwrap() * 1e3;
        assert!(rel((t * 10.0).round() / 10.0, ms) < 0.005, "{t}");
        assert!((code_shift_budget(paper_code, t / 1e3) - chips).abs() < 1e-12);
    }
    for (frac, ms) in [(1.0, 46.6), (0.5, 33.0), (0.25, 23.3)] {
        let t = max_coherent_integration(230.0, frac).unwrap().seconds().unwrap() * 1e3;
        assert!(rel((t * 10.0).round() / 10.0, ms) < 0.005, "{t}");
        let t = t / 1e3;
        assert!((230.0 * t - frac * bin_width(t)).abs() < 1e-9);
    }
    assert_eq!(((carrier_to_code(Band::X1, 230.0)) * 100.0).round() / 100.0, 0.15);
    assert_eq!(((carrier_to_code(Band::X5, 172.0)) * 100.0).round() / 100.0, 1.48);
    assert_eq!(max_coherent_integration(0.0, 1.0).unwrap(), Budget::Unbounded);
    assert_eq!(time_for_shift(0.0, 1.0).unwrap(), Budget::Unbounded);
    assert!(max_coherent_integration(230.0, 0.0).is_err());
}

fn environment() -> impl proptest::strategy::Strategy<Value = Environment> {
    prop_oneof![Just(Environment::OpenSky), (0.0f64..85.0).prop_map(|mask| Environment::Urban { mask })]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_plans_cover_without_overlap(
        env in environment(),
        operation in any::<bool>(),
        strat in 0usize..4,
        tracked in proptest::collection::vec(-40e3f64..40e3, 0..4),
        width in 50.0f64..2000.0,
        hw in proptest::option::of(0.0f64..3000.0),
        class in 0usize..3,
        x5 in any::<bool>(),
    ) {
        let class = [OrbitClass::Inclined, OrbitClass::Polar, OrbitClass::Gps][class];
        let band = match (class, x5) {
            (OrbitClass::Gps, false) => Band::L1CA,
            (OrbitClass::Gps, true) => Band::L5,
            (_, false) => Band::X1,
            (_, true) => Band::X5,
        };
        let strategy = [None, Some(Strategy::LargePositiveFirst), Some(Strategy::ZeroFirst), Some(Strategy::HighElevationFirst)][strat];
        let prop_state = if tracked.is_empty() { PrnState::NewPrn } else { PrnState::Tracked(tracked) };
        let s = Scenario {
            phase: if operation { Phase::Operation } else { Phase::ColdStart },
            environment: env,
            strategy,
            prn_state: prop_state,
        };
        let opts = PlanOptions { exclusion_half_width: hw, ..PlanOptions::new(width) };
        match plan_doppler(&s, band, class, opts, &cal()) {
            Ok(plan) => check_invariants(&plan),
            Err(e) => {
                prop_assert!(matches!(e, Error::Usage(_)));
                prop_assert!(strategy == Some(Strategy::HighElevationFirst) && env == Environment::OpenSky);
            }
        }
    }
}
