//! Inequalities as margin functions of the gap `x`.
//!
//! A margin is positive exactly where the inequality holds strictly at the
//! normalized pair `(1 + x, 1 - x)`.

use std::collections::BTreeMap;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::family::{self, FamilyParams};
use crate::means::{self, GapCoordinate};

use super::Side;

pub trait Inequality: Send + Sync {
    fn name(&self) -> &str;
    /// Echo of the inputs, for reports.
    fn parameters(&self) -> BTreeMap<String, f64>;
    /// Margin at working precision. `x` lies in `(0, 1)`.
    fn margin(&self, x: f64) -> f64;
    /// Independent recomputation of the margin in double-double.
    fn margin_extended(&self, x: f64) -> DoubleDouble;
}

/// `Q_{t,s} < I` (lower) or `I < Q_{t,s}` (upper), via the sign of `f`.
#[derive(Clone, Debug)]
pub struct FamilyCheck {
    params: FamilyParams,
    side: Side,
}

impl FamilyCheck {
    pub fn new(t: f64, s: f64, side: Side) -> Result<Self> {
        Ok(Self {
            params: FamilyParams::new(t, s)?,
            side,
        })
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    fn orient(&self, f: f64) -> f64 {
        match self.side {
            Side::Lower => -f,
            Side::Upper => f,
        }
    }
}

impl Inequality for FamilyCheck {
    fn name(&self) -> &str {
        "family"
    }

    fn parameters(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("t".to_string(), self.params.t()),
            ("s".to_string(), self.params.s()),
            ("u".to_string(), self.params.u()),
            ("side".to_string(), self.side.code()),
        ])
    }

    fn margin(&self, x: f64) -> f64 {
        self.orient(family::f_unchecked(&self.params, x))
    }

    fn margin_extended(&self, x: f64) -> DoubleDouble {
        let f = family::f_dd_unchecked(&self.params, x);
        match self.side {
            Side::Lower => -f,
            Side::Upper => f,
        }
    }
}

/// `exp(p x^2) < A/I < exp(q x^2)`; the margin is `min(g_p, -g_q)`.
#[derive(Clone, Debug)]
pub struct ExponentialCheck {
    lower_coef: f64,
    upper_coef: f64,
}

impl ExponentialCheck {
    pub fn new(lower_coef: f64, upper_coef: f64) -> Result<Self> {
        for (name, c) in [("p_coef", lower_coef), ("q_coef", upper_coef)] {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidParameter {
                    name: name.into(),
                    reason: format!("must be a finite positive real, got {c}"),
                });
            }
        }
        Ok(Self {
            lower_coef,
            upper_coef,
        })
    }
}

impl Inequality for ExponentialCheck {
    fn name(&self) -> &str {
        "exponential"
    }

    fn parameters(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("p_coef".to_string(), self.lower_coef),
            ("q_coef".to_string(), self.upper_coef),
        ])
    }

    fn margin(&self, x: f64) -> f64 {
        let lower = family::g_unchecked(self.lower_coef, x);
        let upper = -family::g_unchecked(self.upper_coef, x);
        lower.min(upper)
    }

    fn margin_extended(&self, x: f64) -> DoubleDouble {
        let lower = family::g_dd_unchecked(self.lower_coef, x);
        let upper = -family::g_dd_unchecked(self.upper_coef, x);
        if lower < upper {
            lower
        } else {
            upper
        }
    }
}

/// `w A^p + (1 - w) G^p < I^p` (lower) or `I^p < w A^p + (1 - w) G^p`
/// (upper).
///
/// With `A = 1` the difference `I^p - w - (1 - w) G^p` is formed as
/// `expm1(p ln I) - (1 - w) expm1((p/2) ln(1 - x^2))`, which keeps its
/// fourth-order behaviour at small `x`.
///
/// The weight is held in double-double. Sharp weights such as 2/3 are not
/// doubles, and at a sharp weight the second-order term of the difference
/// vanishes, so the 1e-17 rounding of the weight would otherwise decide the
/// sign for gaps below about 1e-8.
#[derive(Clone, Debug)]
pub struct ConvexPowerCheck {
    name: &'static str,
    exponent: f64,
    weight: DoubleDouble,
    side: Side,
}

impl ConvexPowerCheck {
    pub fn new(exponent: f64, weight: impl Into<DoubleDouble>, side: Side) -> Result<Self> {
        Self::named("convex-power", exponent, weight.into(), side)
    }

    pub(crate) fn named(
        name: &'static str,
        exponent: f64,
        weight: DoubleDouble,
        side: Side,
    ) -> Result<Self> {
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidParameter {
                name: "p_exp".into(),
                reason: format!("must be a finite positive real, got {exponent}"),
            });
        }
        if !(weight.is_finite()
            && !weight.is_sign_negative()
            && !(DoubleDouble::ONE - weight).is_sign_negative())
        {
            return Err(Error::InvalidParameter {
                name: "weight".into(),
                reason: format!("must lie in [0, 1], got {}", weight.to_f64()),
            });
        }
        Ok(Self {
            name,
            exponent,
            weight,
            side,
        })
    }

    fn difference(&self, x: f64) -> f64 {
        let lr = means::log_ratio_i_over_a(GapCoordinate::new(x).expect("x in (0, 1)"));
        let ln_g = 0.5 * ln_one_minus_sq(x);
        let complement = (DoubleDouble::ONE - self.weight).to_f64();
        (self.exponent * lr).exp_m1() - complement * (self.exponent * ln_g).exp_m1()
    }

    fn difference_dd(&self, x: f64) -> DoubleDouble {
        let lr = means::log_ratio_i_over_a_dd(x);
        let ln_g = ln_one_minus_sq_dd(x).mul_pow2(-1);
        let complement = DoubleDouble::ONE - self.weight;
        (lr * self.exponent).exp_m1() - complement * (ln_g * self.exponent).exp_m1()
    }
}

impl Inequality for ConvexPowerCheck {
    fn name(&self) -> &str {
        self.name
    }

    fn parameters(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("p_exp".to_string(), self.exponent),
            ("weight".to_string(), self.weight.to_f64()),
            ("side".to_string(), self.side.code()),
        ])
    }

    fn margin(&self, x: f64) -> f64 {
        match self.side {
            Side::Lower => self.difference(x),
            Side::Upper => -self.difference(x),
        }
    }

    fn margin_extended(&self, x: f64) -> DoubleDouble {
        match self.side {
            Side::Lower => self.difference_dd(x),
            Side::Upper => -self.difference_dd(x),
        }
    }
}

fn ln_one_minus_sq(x: f64) -> f64 {
    if x < 0.5 {
        (-x * x).ln_1p()
    } else {
        (1.0 - x).ln() + x.ln_1p()
    }
}

fn ln_one_minus_sq_dd(x: f64) -> DoubleDouble {
    if x < 0.5 {
        (-DoubleDouble::from_product(x, x)).ln_1p()
    } else {
        (DoubleDouble::from_sum(1.0, -x) * DoubleDouble::from_sum(1.0, x)).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::means::{geometric_mean, identric_mean, PositivePair};

    #[test]
    fn convex_margin_matches_direct_means() {
        let check = ConvexPowerCheck::new(2.0, 0.3, Side::Lower).unwrap();
        for x in [0.2, 0.5, 0.9] {
            let pair = PositivePair::new(1.0 + x, 1.0 - x).unwrap();
            let direct = identric_mean(pair).powi(2) - 0.3 - 0.7 * geometric_mean(pair).powi(2);
            assert!((check.margin(x) - direct).abs() < 1e-14, "x = {x}");
            assert!((check.margin_extended(x).to_f64() - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn family_margin_sign_follows_side() {
        let lower = FamilyCheck::new(0.1, 2.0, Side::Lower).unwrap();
        let upper = FamilyCheck::new(0.1, 2.0, Side::Upper).unwrap();
        assert_eq!(lower.margin(0.3), -upper.margin(0.3));
        assert!(lower.margin(0.3) > 0.0);
    }

    #[test]
    fn exponential_margin_is_the_tighter_side() {
        let c = ExponentialCheck::new(1.0 / 6.0, 1.0 - std::f64::consts::LN_2).unwrap();
        let x = 0.4;
        let m = c.margin(x);
        assert!(m > 0.0);
        assert!((c.margin_extended(x).to_f64() - m).abs() < 1e-15);
        assert!(ExponentialCheck::new(0.0, 0.3).is_err());
    }
}
