//! The classical two-argument means and the `Q_{t,s}` family.
//!
//! Every mean here is symmetric and homogeneous of degree one, so the
//! non-trivial ones are evaluated through the arithmetic mean `A` and the
//! normalized gap `v = |a - b| / (a + b)`: `ln(M / A)` depends on `v` alone.

use serde::Serialize;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Below this gap `ln(I / A)` is summed from its even power series.
///
/// The closed form cancels a leading `-1` against `atanh(v) / v`, which costs
/// about `log10(6 / v^2)` digits, so the series is kept up to a gap where the
/// closed form is back to full working precision.
pub const SERIES_CROSSOVER: f64 = 0.1;

/// Largest gap representable below 1.
const MAX_GAP: f64 = 1.0 - f64::EPSILON / 2.0;

/// Two strictly positive reals, in any order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositivePair {
    a: f64,
    b: f64,
}

impl PositivePair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::NonPositivePair(a, b));
        }
        Ok(Self { a, b })
    }

    /// The normalized pair `(1 + v, 1 - v)` whose gap is `v`.
    pub fn from_gap(gap: GapCoordinate) -> Self {
        Self {
            a: 1.0 + gap.value(),
            b: gap.complement(),
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.a * factor, self.b * factor)
    }

    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }
}

/// Normalized gap `v = |a - b| / (a + b)` together with `1 - v`.
///
/// The complement is carried separately because for widely separated
/// arguments `1 - v = 2 min(a, b) / (a + b)` is far more accurate than the
/// difference of the rounded `v` from one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapCoordinate {
    v: f64,
    complement: f64,
}

impl GapCoordinate {
    pub fn new(v: f64) -> Result<Self> {
        if !(v.is_finite() && (0.0..1.0).contains(&v)) {
            return Err(Error::GapOutOfRange(v));
        }
        Ok(Self {
            v,
            complement: 1.0 - v,
        })
    }

    pub fn value(&self) -> f64 {
        self.v
    }

    /// `1 - v`.
    pub fn complement(&self) -> f64 {
        self.complement
    }
}

pub fn arithmetic_mean(p: PositivePair) -> f64 {
    if p.a == p.b {
        return p.a;
    }
    p.a / 2.0 + p.b / 2.0
}

pub fn geometric_mean(p: PositivePair) -> f64 {
    if p.a == p.b {
        return p.a;
    }
    let prod = p.a * p.b;
    if prod.is_finite() && prod.is_normal() {
        prod.sqrt()
    } else {
        p.a.sqrt() * p.b.sqrt()
    }
}

pub fn harmonic_mean(p: PositivePair) -> f64 {
    if p.a == p.b {
        return p.a;
    }
    // 2ab / (a + b) = a * (b / A), ordered so that swapping is bit-exact
    let (lo, hi) = (p.a.min(p.b), p.a.max(p.b));
    lo * (hi / arithmetic_mean(p))
}

/// Identric mean `(1/e) (a^a / b^b)^(1 / (a - b))`, with `I(a, a) = a`.
///
/// Evaluated as `A * exp(ln(I / A))` so it never forms `a^a`. The whole
/// product is carried in double-double and rounded once, which keeps
/// symmetry and homogeneity within a couple of ulps even for pairs many
/// orders of magnitude apart.
pub fn identric_mean(p: PositivePair) -> f64 {
    if p.a == p.b {
        return p.a;
    }
    let mean = DoubleDouble::from_sum(p.a / 2.0, p.b / 2.0);
    (mean * log_ratio_of_gap_dd(gap(p)).exp()).to_f64()
}

/// `Q_{t,s}(a, b) = G^s(ta + (1-t)b, tb + (1-t)a) A^(1-s)(a, b)`.
pub fn q_mean(p: PositivePair, t: f64, s: f64) -> Result<f64> {
    check_weight(t)?;
    check_exponent(s)?;
    if p.a == p.b {
        return Ok(p.a);
    }
    // The exponent multiplies any error in the gap by up to s/2, so the gap
    // itself is formed in double-double here.
    let (lo, hi) = (p.a.min(p.b), p.a.max(p.b));
    let mean = DoubleDouble::from_sum(hi / 2.0, lo / 2.0);
    let v = DoubleDouble::from_sum(hi / 2.0, -lo / 2.0) / mean;
    let complement = DoubleDouble::from_f64(lo) / mean;
    let log_ratio = ln_one_minus_weighted_gap_sq_dd(v, complement, t) * (0.5 * s);
    Ok((mean * log_ratio.exp()).to_f64())
}

/// `ln(Q_{t,s} / A) = (s/2) ln(1 - (1-2t)^2 v^2)`.
pub fn log_ratio_q_over_a(v: GapCoordinate, t: f64, s: f64) -> Result<f64> {
    check_weight(t)?;
    check_exponent(s)?;
    Ok(0.5 * s * ln_one_minus_weighted_gap_sq(v, t))
}

/// `ln(1 - w^2)` for `w = (1 - 2t) v`, split as `ln(1 - w) + ln(1 + w)`.
///
/// `1 - w = (1 - v) + 2tv` is a sum of non-negative terms, so it stays
/// accurate when `w` approaches one.
fn ln_one_minus_weighted_gap_sq(v: GapCoordinate, t: f64) -> f64 {
    let w = (1.0 - 2.0 * t) * v.value();
    let ln_minus = if w < 0.5 {
        (-w).ln_1p()
    } else {
        (v.complement() + 2.0 * t * v.value()).ln()
    };
    ln_minus + w.ln_1p()
}

fn ln_one_minus_weighted_gap_sq_dd(
    v: DoubleDouble,
    complement: DoubleDouble,
    t: f64,
) -> DoubleDouble {
    let w = DoubleDouble::from_sum(1.0, -2.0 * t) * v;
    let ln_minus = if w.hi() < 0.5 {
        (-w).ln_1p()
    } else {
        (complement + v * (2.0 * t)).ln()
    };
    ln_minus + w.ln_1p()
}

pub fn gap(p: PositivePair) -> GapCoordinate {
    if p.a == p.b {
        return GapCoordinate {
            v: 0.0,
            complement: 1.0,
        };
    }
    let mean = arithmetic_mean(p);
    let half_diff = (p.a / 2.0 - p.b / 2.0).abs();
    let v = (half_diff / mean).min(MAX_GAP);
    let complement = (p.a.min(p.b) / mean).max(f64::MIN_POSITIVE);
    GapCoordinate { v, complement }
}

/// `ln(I / A)` as a function of the gap alone:
/// `-1 + ln(1 - v^2) / 2 + ln((1 + v) / (1 - v)) / (2v)`.
///
/// Zero at `v = 0`, strictly negative on `(0, 1)`, tending to `ln(2/e)` as
/// `v -> 1`.
pub fn log_ratio_i_over_a(v: GapCoordinate) -> f64 {
    let x = v.value();
    if x == 0.0 {
        return 0.0;
    }
    if x < SERIES_CROSSOVER {
        return log_ratio_series(x);
    }
    // Grouped by logarithm rather than as atanh(v)/v + ln(1 - v^2)/2: near
    // v = 1 those two pieces are large and cancel, while c ln c stays small.
    // The stored complement is only preferred where it is the better `1 - v`.
    let c_ln_c = if x < 0.5 {
        (1.0 - x) * (-x).ln_1p()
    } else {
        let c = v.complement();
        c * c.ln()
    };
    ((1.0 + x) * x.ln_1p() - c_ln_c) / (2.0 * x) - 1.0
}

/// Even power series `ln(I / A) = -sum_{k>=1} v^(2k) / (2k (2k + 1))`.
///
/// Follows from `atanh(v)/v = sum v^(2k)/(2k+1)` and
/// `ln(1 - v^2)/2 = -sum v^(2k)/(2k)`. Summed until the terms stop
/// contributing, so it is usable for any `|v| < 1` though it only converges
/// quickly for small `v`.
pub fn log_ratio_series(v: f64) -> f64 {
    let v2 = v * v;
    let mut power = v2;
    let mut sum = 0.0;
    for k in 1..=4000u32 {
        let two_k = f64::from(2 * k);
        let term = power / (two_k * (two_k + 1.0));
        sum += term;
        if term <= f64::EPSILON * 0.25 * sum {
            break;
        }
        power *= v2;
    }
    -sum
}

/// `ln(I / A)` in double-double: series below [`SERIES_CROSSOVER`], closed
/// form above.
pub fn log_ratio_i_over_a_dd(v: f64) -> DoubleDouble {
    if v == 0.0 {
        return DoubleDouble::ZERO;
    }
    if v < SERIES_CROSSOVER {
        let v2 = DoubleDouble::from_product(v, v);
        let mut power = v2;
        let mut sum = DoubleDouble::ZERO;
        for k in 1..=200u32 {
            let two_k = f64::from(2 * k);
            let term = power / (two_k * (two_k + 1.0));
            sum = sum + term;
            if term.hi() <= 1e-34 * sum.hi() {
                break;
            }
            power = power * v2;
        }
        -sum
    } else {
        log_ratio_direct_dd(v)
    }
}

/// `ln(I / A)` in double-double from a gap and its complement.
///
/// Above the series range it uses `((1+v) ln(1+v) - c ln c) / (2v) - 1`
/// with `c = 1 - v` taken from the complement, so gaps within an ulp of 1
/// keep their distance to 1.
pub fn log_ratio_of_gap_dd(v: GapCoordinate) -> DoubleDouble {
    let x = v.value();
    if x < SERIES_CROSSOVER {
        return log_ratio_i_over_a_dd(x);
    }
    let c = if x < 0.5 {
        DoubleDouble::from_sum(1.0, -x)
    } else {
        DoubleDouble::from_f64(v.complement())
    };
    let plus = DoubleDouble::from_sum(1.0, x);
    let num = plus * DoubleDouble::from_f64(x).ln_1p() - c * c.ln();
    num / (2.0 * x) - 1.0
}

/// The closed form `-1 + ln(1 - v^2)/2 + atanh(v)/v` evaluated term by term
/// in double-double, without any series for `ln(I / A)` itself.
pub fn log_ratio_direct_dd(v: f64) -> DoubleDouble {
    let x = DoubleDouble::from_f64(v);
    let one_minus_sq = -DoubleDouble::from_product(v, v);
    let half_log = one_minus_sq.ln_1p().mul_pow2(-1);
    (x.atanh() / x - 1.0) + half_log
}

pub(crate) fn check_weight(t: f64) -> Result<()> {
    if t.is_finite() && (0.0..=0.5).contains(&t) {
        Ok(())
    } else {
        Err(Error::WeightOutOfRange(t))
    }
}

pub(crate) fn check_exponent(s: f64) -> Result<()> {
    if s.is_finite() && s >= 1.0 {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(s))
    }
}
