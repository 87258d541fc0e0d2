use identric_core::family::{self, FamilyParams};
use identric_core::means::{
    arithmetic_mean, gap, geometric_mean, harmonic_mean, identric_mean, log_ratio_i_over_a,
    log_ratio_q_over_a, q_mean, GapCoordinate, PositivePair,
};
use identric_core::thresholds::{membership, sharp_thresholds, Membership};
use proptest::prelude::*;

fn pair(a: f64, b: f64) -> PositivePair {
    PositivePair::new(a, b).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Positive doubles spread over many binades.
fn magnitude() -> impl Strategy<Value = f64> {
    (1.0f64..2.0, -40i32..40).prop_map(|(m, e)| m * 2f64.powi(e))
}

fn distinct_pair() -> impl Strategy<Value = (f64, f64)> {
    (magnitude(), magnitude()).prop_filter("distinct", |(a, b)| a != b)
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![1.0f64..4.0, 4.0f64..1e3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn classical_chain_is_strict((a, b) in distinct_pair()) {
        let p = pair(a, b);
        let (h, g, i, am) = (harmonic_mean(p), geometric_mean(p), identric_mean(p), arithmetic_mean(p));
        prop_assert!(h <= g && g < i && i < am, "H {h} G {g} I {i} A {am}");
        prop_assert!(a.min(b) <= h && am <= a.max(b));
    }

    #[test]
    fn means_are_symmetric((a, b) in distinct_pair(), t in 0.0f64..=0.5, s in exponent()) {
        let (p, q) = (pair(a, b), pair(b, a));
        prop_assert_eq!(harmonic_mean(p), harmonic_mean(q));
        prop_assert_eq!(geometric_mean(p), geometric_mean(q));
        prop_assert_eq!(identric_mean(p), identric_mean(q));
        prop_assert_eq!(q_mean(p, t, s).unwrap(), q_mean(q, t, s).unwrap());
    }

    #[test]
    fn scaling_by_a_power_of_two_is_exact((a, b) in distinct_pair(), k in -20i32..20, t in 0.0f64..=0.5, s in exponent()) {
        let lambda = 2f64.powi(k);
        let (p, q) = (pair(a, b), pair(lambda * a, lambda * b));
        prop_assert_eq!(identric_mean(q), lambda * identric_mean(p));
        prop_assert_eq!(q_mean(q, t, s).unwrap(), lambda * q_mean(p, t, s).unwrap());
        prop_assert_eq!(gap(q).value(), gap(p).value());
    }

    #[test]
    fn gap_lies_in_the_unit_interval((a, b) in distinct_pair()) {
        let v = gap(pair(a, b)).value();
        prop_assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn log_ratio_is_between_its_limits(v in 1e-8f64..0.999_999) {
        let lr = log_ratio_i_over_a(GapCoordinate::new(v).unwrap());
        let ln_two_over_e = std::f64::consts::LN_2 - 1.0;
        prop_assert!(lr < 0.0 && lr > ln_two_over_e, "v = {v}: {lr}");
        // A/I sits strictly between the sharp exponential bounds
        let ratio = -lr / (v * v);
        prop_assert!(ratio > 1.0 / 6.0 && ratio < -ln_two_over_e, "v = {v}: {ratio}");
    }

    #[test]
    fn half_weight_is_the_arithmetic_mean((a, b) in distinct_pair(), s in exponent()) {
        let p = pair(a, b);
        prop_assert!(rel(q_mean(p, 0.5, s).unwrap(), arithmetic_mean(p)) <= f64::EPSILON);
    }

    #[test]
    fn exponent_two_is_a_shifted_harmonic_mean(a in 0.01f64..100.0, b in 0.01f64..100.0, t in 0.0f64..=0.5) {
        let p = pair(a, b);
        let shifted = pair(t * a + (1.0 - t) * b, t * b + (1.0 - t) * a);
        prop_assert!(rel(q_mean(p, t, 2.0).unwrap(), harmonic_mean(shifted)) < 1e-13);
    }

    #[test]
    fn zero_weight_exponent_one_is_the_geometric_mean((a, b) in distinct_pair()) {
        let p = pair(a, b);
        prop_assert!(rel(q_mean(p, 0.0, 1.0).unwrap(), geometric_mean(p)) < 4.0 * f64::EPSILON);
    }

    #[test]
    fn q_is_decreasing_in_s_and_increasing_in_t(v in 0.01f64..0.99, t in 0.0f64..0.49, s in 1.0f64..50.0) {
        let v = GapCoordinate::new(v).unwrap();
        let base = log_ratio_q_over_a(v, t, s).unwrap();
        prop_assert!(log_ratio_q_over_a(v, t, s * 1.5).unwrap() < base);
        prop_assert!(log_ratio_q_over_a(v, t + 0.01, s).unwrap() > base);
    }

    #[test]
    fn sharp_sets_bound_the_identric_mean((a, b) in distinct_pair(), s in exponent(), frac in 0.0f64..=1.0) {
        let th = sharp_thresholds(s).unwrap();
        let p = pair(a, b);
        let i = identric_mean(p);
        let lower_t = th.p * frac;
        let upper_t = th.q + (0.5 - th.q) * frac;
        prop_assert_eq!(membership(lower_t, s).unwrap(), Membership::LowerBoundHolds);
        prop_assert_eq!(membership(upper_t, s).unwrap(), Membership::UpperBoundHolds);
        // rounding can only tie near the shared limits, never reverse
        prop_assert!(q_mean(p, lower_t, s).unwrap() <= i * (1.0 + 2.0 * f64::EPSILON));
        prop_assert!(q_mean(p, upper_t, s).unwrap() >= i * (1.0 - 2.0 * f64::EPSILON));
    }

    #[test]
    fn f_matches_the_log_of_the_mean_ratio(v in 0.05f64..0.95, t in 0.0f64..=0.5, s in 1.0f64..20.0) {
        let p = PositivePair::from_gap(GapCoordinate::new(v).unwrap());
        let params = FamilyParams::new(t, s).unwrap();
        let direct = (q_mean(p, t, s).unwrap() / identric_mean(p)).ln();
        prop_assert!((family::f(&params, v).unwrap() - direct).abs() < 1e-14);
    }
}

#[test]
fn thresholds_increase_towards_one_half() {
    let mut last = sharp_thresholds(1.0).unwrap();
    for k in 1..=990 {
        let s = 1.0 + f64::from(k) * 0.1;
        let th = sharp_thresholds(s).unwrap();
        assert!(th.p < th.q && th.q < 0.5, "s = {s}");
        assert!(th.p > last.p && th.q > last.q, "s = {s}");
        last = th;
    }
}

#[test]
fn large_exponent_recovers_the_exponential_limit() {
    // at t = q_s, ln(Q/A) = (s/2) ln(1 - v^2/(3s)), which tends to -v^2/6
    let s = 1e6;
    let th = sharp_thresholds(s).unwrap();
    for v in [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let lr = log_ratio_q_over_a(GapCoordinate::new(v).unwrap(), th.q, s).unwrap();
        let limit = -v * v / 6.0;
        assert!(rel(lr, limit) < 1e-5, "v = {v}: {lr} vs {limit}");
        assert!(rel(lr.exp(), limit.exp()) < 1e-5);
    }
}
