use identric_core::family::{self, FamilyParams};
use identric_core::means::log_ratio_i_over_a_dd;
use identric_core::thresholds::{exponential_bound_constants, sharp_thresholds};
use identric_core::verify::{
    certify_sign, empirical_threshold, falsify, settled_margin, verify, verify_convex_power_bound,
    verify_exponential_bounds, verify_family_inequality, verify_kou_power, CheckArgs,
    CheckRegistry, FamilyCheck, GridSpec, KouClass, NodeStatus, Sign,
};
use identric_core::{DoubleDouble, Error, Side, Verdict};

const SHIFT: f64 = 1e-3;

#[test]
fn family_boundary_holds_and_nudges_fail_at_the_predicted_end() {
    let th = sharp_thresholds(2.0).unwrap();
    let grid = GridSpec::default();
    assert!(verify_family_inequality(th.p, 2.0, Side::Lower, &grid)
        .unwrap()
        .holds());
    assert!(verify_family_inequality(th.q, 2.0, Side::Upper, &grid)
        .unwrap()
        .holds());

    let r = verify_family_inequality(th.p + SHIFT, 2.0, Side::Lower, &grid).unwrap();
    assert_eq!(r.verdict, Verdict::Violated);
    let w = r.witness.unwrap();
    assert!(w.x > 0.99 && w.confirmed(), "{w:?}");
    assert_eq!((w.a, w.b), (1.0 + w.x, 1.0 - w.x));

    let r = verify_family_inequality(th.q - SHIFT, 2.0, Side::Upper, &grid).unwrap();
    let w = r.witness.unwrap();
    assert!(w.x < 0.2 && w.confirmed(), "{w:?}");
}

#[test]
fn falsify_examples() {
    let th = sharp_thresholds(1.0).unwrap();
    let w = falsify(th.p + 0.01, 1.0, Side::Lower).unwrap();
    assert!(w.x > 0.99 && w.confirmed());
    let params = FamilyParams::new(th.p + 0.01, 1.0).unwrap();
    assert!(family::f(&params, w.x).unwrap() > 0.0);

    let w = falsify(th.q - 0.01, 1.0, Side::Upper).unwrap();
    assert!(w.x < 0.1 && w.confirmed());
    let params = FamilyParams::new(th.q - 0.01, 1.0).unwrap();
    assert!(family::f(&params, w.x).unwrap() < 0.0);

    let p2 = sharp_thresholds(2.0).unwrap().p;
    assert!(matches!(
        falsify(p2, 2.0, Side::Lower),
        Err(Error::NotOutsideSharpInterval { .. })
    ));
}

#[test]
fn empirical_thresholds_recover_the_closed_forms() {
    let grid = GridSpec::default();
    for (s, side) in [(2.0, Side::Lower), (1.0, Side::Upper), (10.0, Side::Lower)] {
        let th = sharp_thresholds(s).unwrap();
        let exact = match side {
            Side::Lower => th.p,
            Side::Upper => th.q,
        };
        let t = empirical_threshold(s, side, &grid, 1e-7).unwrap();
        assert!((t - exact).abs() < 1e-5, "s = {s}, {side}: {t} vs {exact}");
    }
    let q1 = (3.0 - 3f64.sqrt()) / 6.0;
    let t = empirical_threshold(1.0, Side::Upper, &grid, 1e-7).unwrap();
    assert!((t - q1).abs() < 1e-5);
}

#[test]
fn exponential_constants_are_sharp() {
    let c = exponential_bound_constants();
    let grid = GridSpec::default();
    assert!(verify_exponential_bounds(c.lower, c.upper, &grid)
        .unwrap()
        .holds());

    let r = verify_exponential_bounds(c.lower + SHIFT, c.upper, &grid).unwrap();
    assert!(r.witness.unwrap().x < 0.2);
    let r = verify_exponential_bounds(c.lower, c.upper - SHIFT, &grid).unwrap();
    assert!(r.witness.unwrap().x > 0.9);
}

#[test]
fn mean_ratio_exponent_increases_across_the_grid() {
    // ln(A/I)/x^2 climbs from 1/6 to ln(e/2); near x = 0 it exceeds 1/6 only
    // by about x^2/20, so it is formed in double-double
    let sixth = DoubleDouble::ONE / 6.0;
    let upper = DoubleDouble::ONE - identric_core::dd::LN_2;
    let mut last = sixth;
    for x in GridSpec::default().points() {
        let ratio = -log_ratio_i_over_a_dd(x) / DoubleDouble::from_product(x, x);
        assert!(ratio > sixth && ratio < upper, "x = {x}: {ratio}");
        assert!(ratio > last, "x = {x}: {ratio} <= {last}");
        last = ratio;
    }
}

#[test]
fn classical_convex_bounds() {
    assert!(
        verify_convex_power_bound(1.0, DoubleDouble::from_f64(2.0) / 3.0, Side::Lower)
            .unwrap()
            .holds()
    );
    let two_over_e = 2.0 / std::f64::consts::E;
    assert!(
        verify_convex_power_bound(2.0, two_over_e * two_over_e, Side::Lower)
            .unwrap()
            .holds()
    );
    assert!(
        !verify_convex_power_bound(1.0, 2.0 / 3.0 + SHIFT, Side::Lower)
            .unwrap()
            .holds()
    );
}

#[test]
fn kou_classification() {
    assert!(verify_kou_power(1.4).unwrap().forward.holds());
    assert!(verify_kou_power(1.1).unwrap().reverse.holds());
    let between = verify_kou_power(1.25).unwrap();
    assert_eq!(between.classification, KouClass::Neither);
    for r in [&between.forward, &between.reverse] {
        assert!(r.witness.unwrap().confirmed());
    }
}

#[test]
fn certificates_inside_the_sharp_sets() {
    let th = sharp_thresholds(2.0).unwrap();
    for (t, sign, status) in [
        (th.p - 0.01, Sign::Negative, NodeStatus::ProvedNegative),
        (th.q + 0.01, Sign::Positive, NodeStatus::ProvedPositive),
        (th.p, Sign::Negative, NodeStatus::ProvedNegative),
    ] {
        let cert = certify_sign(t, 2.0, 0.01, 0.99, sign, 100_000).unwrap();
        assert!(cert.proved, "t = {t}");
        assert!(cert.leaves().all(|n| n.status == status));
        // leaves tile the interval
        let mut leaves: Vec<_> = cert.leaves().map(|n| (n.lo, n.hi)).collect();
        leaves.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert_eq!(leaves[0].0, 0.01);
        assert_eq!(leaves.last().unwrap().1, 0.99);
        assert!(leaves.windows(2).all(|w| w[0].1 == w[1].0));
    }
}

#[test]
fn proved_intervals_contain_no_failing_grid_point() {
    let th = sharp_thresholds(3.0).unwrap();
    let t = th.p - 0.005;
    let cert = certify_sign(t, 3.0, 0.05, 0.95, Sign::Negative, 100_000).unwrap();
    assert!(cert.proved);
    let params = FamilyParams::new(t, 3.0).unwrap();
    for x in GridSpec::uniform(5000).points() {
        if cert.leaves().any(|n| n.lo <= x && x <= n.hi) {
            assert!(family::f(&params, x).unwrap() < 0.0, "x = {x}");
        }
    }
}

#[test]
fn outside_the_sharp_set_certification_fails_without_claiming_proof() {
    let th = sharp_thresholds(2.0).unwrap();
    let cert = certify_sign(th.q - 0.05, 2.0, 0.01, 0.99, Sign::Positive, 2_000).unwrap();
    assert!(!cert.proved);
    assert!(cert.nodes.len() <= 2_000);
}

#[test]
fn reports_are_deterministic_under_parallelism() {
    let th = sharp_thresholds(1.5).unwrap();
    let check = FamilyCheck::new(th.p + 0.002, 1.5, Side::Lower).unwrap();
    let grid = GridSpec::refined(20_000);
    let first = verify(&check, &grid).unwrap();
    for _ in 0..5 {
        assert_eq!(verify(&check, &grid).unwrap(), first);
    }
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| verify(&check, &grid).unwrap());
    assert_eq!(single, first);
}

#[test]
fn witness_margins_agree_with_the_extended_recheck() {
    let th = sharp_thresholds(2.0).unwrap();
    let check = FamilyCheck::new(th.p + SHIFT, 2.0, Side::Lower).unwrap();
    let r = verify(&check, &GridSpec::default()).unwrap();
    let w = r.witness.unwrap();
    let (margin, _) = settled_margin(&check, w.x);
    assert_eq!(margin, r.worst_margin);
    assert!(w.margin_extended < 0.0 && w.margin_working < 0.0);
}

#[test]
fn registry_builds_the_same_checks_as_the_direct_api() {
    let registry = CheckRegistry::with_builtins();
    let th = sharp_thresholds(2.0).unwrap();
    let args = CheckArgs {
        t: Some(th.p + SHIFT),
        s: Some(2.0),
        side: Some(Side::Lower),
        ..Default::default()
    };
    let grid = GridSpec::refined(3000);
    let via_registry = verify(registry.build("family", &args).unwrap().as_ref(), &grid).unwrap();
    let direct = verify_family_inequality(th.p + SHIFT, 2.0, Side::Lower, &grid).unwrap();
    assert_eq!(via_registry, direct);

    let kou = CheckArgs {
        p_exp: Some(1.4),
        ..Default::default()
    };
    let r = verify(registry.build("kou-forward", &kou).unwrap().as_ref(), &grid).unwrap();
    assert_eq!(r.check, "kou-forward");
    assert!(r.holds());
}
