//! Sharp endpoints of the parameter sets `L_s = [0, p_s]` and `U_s = [q_s, 1/2]`.
//!
//! `p_s = 1/2 - sqrt(1 - (2/e)^{2/s}) / 2` is where `u + (2/e)^{2/s} = 1`
//! (the limit of `f` at 1 reaches zero) and `q_s = 1/2 - 1/(2 sqrt(3s))` is
//! where `3su = 1` (the quadratic coefficient of `f` at 0 vanishes).

use serde::Serialize;

use crate::dd::{DoubleDouble, LN_2};
use crate::error::Result;
use crate::means::{check_exponent, check_weight};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdSet {
    pub s: f64,
    /// Upper end of `L_s`, rounded down onto a double inside `L_s`.
    pub p: f64,
    /// Lower end of `U_s`, rounded up onto a double inside `U_s`.
    pub q: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentialBoundConstants {
    /// Largest `c` with `exp(c v^2) < A/I`: 1/6.
    pub lower: f64,
    /// Smallest `c` with `A/I < exp(c v^2)`: `ln(e/2) = 1 - ln 2`.
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// `t <= p_s`: `Q_{t,s} < I` for every pair.
    LowerBoundHolds,
    /// `t >= q_s`: `I < Q_{t,s}` for every pair.
    UpperBoundHolds,
    Neither,
}

/// `1 - (2/e)^{2/s}` as `-expm1((2/s)(ln 2 - 1))`.
fn one_minus_two_over_e_pow_dd(s: f64) -> DoubleDouble {
    let exponent = (LN_2 - 1.0) * (DoubleDouble::from_f64(2.0) / s);
    -exponent.exp_m1()
}

/// Rounds a double-double to the nearest double, then steps one ulp in the
/// requested direction if rounding crossed it.
fn round_toward(x: DoubleDouble, up: bool) -> f64 {
    let r = x.to_f64();
    let overshoot = DoubleDouble::from_f64(r) - x;
    if up && overshoot.is_sign_negative() && overshoot.hi() != 0.0 {
        r.next_up()
    } else if !up && !overshoot.is_sign_negative() && overshoot.hi() != 0.0 {
        r.next_down()
    } else {
        r
    }
}

pub fn p_exact_dd(s: f64) -> DoubleDouble {
    (DoubleDouble::ONE - one_minus_two_over_e_pow_dd(s).sqrt()).mul_pow2(-1)
}

pub fn q_exact_dd(s: f64) -> DoubleDouble {
    let root = DoubleDouble::from_f64(3.0 * s).sqrt();
    (DoubleDouble::ONE - root.recip()).mul_pow2(-1)
}

/// Closed-form `p_s` and `q_s`.
///
/// Both are evaluated in double-double and rounded into their sets, so
/// `t = p_s` and `t = q_s` passed on as doubles are genuine members of `L_s`
/// and `U_s`.
pub fn sharp_thresholds(s: f64) -> Result<ThresholdSet> {
    check_exponent(s)?;
    Ok(ThresholdSet {
        s,
        p: round_toward(p_exact_dd(s), false),
        q: round_toward(q_exact_dd(s), true),
    })
}

pub fn membership(t: f64, s: f64) -> Result<Membership> {
    check_weight(t)?;
    let th = sharp_thresholds(s)?;
    Ok(if t <= th.p {
        Membership::LowerBoundHolds
    } else if t >= th.q {
        Membership::UpperBoundHolds
    } else {
        Membership::Neither
    })
}

pub fn exponential_bound_constants() -> ExponentialBoundConstants {
    ExponentialBoundConstants {
        lower: 1.0 / 6.0,
        upper: 1.0 - std::f64::consts::LN_2,
    }
}

/// Re-derives both thresholds from the conditions that define them:
/// `u(p_s) + (2/e)^{2/s} = 1` and `3s u(q_s) = 1`, each within `1e-12`.
pub fn threshold_consistency(s: f64) -> Result<bool> {
    let th = sharp_thresholds(s)?;
    let u_p = (1.0 - 2.0 * th.p).powi(2);
    let u_q = (1.0 - 2.0 * th.q).powi(2);
    let two_over_e_pow = ((2.0 / s) * (std::f64::consts::LN_2 - 1.0)).exp();
    Ok((u_p + two_over_e_pow - 1.0).abs() <= 1e-12 && (3.0 * s * u_q - 1.0).abs() <= 1e-12)
}
