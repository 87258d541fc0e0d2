//! The one-variable functions behind the `Q_{t,s}` versus identric comparison.
//!
//! With `u = (1 - 2t)^2` and `x` the gap of a pair,
//!
//! ```text
//! f_{u,s}(x) = 1 - ln((1+x)/(1-x)) / (2x) - ln(1 - x^2) / 2 + (s/2) ln(1 - u x^2)
//!            = ln(Q_{t,s} / I)
//! h_{u,s}(x) = -x + atanh(x) - s u x^3 / (1 - u x^2),       f' = h / x^2
//! T_{u,s}(X) = (1-s) u^2 X^2 - (2 - 3s - su) u X + (1 - 3su)
//! ```
//!
//! `h' = x^2 T(x^2) / ((1 - x^2)(1 - u x^2)^2)`, so the sign of `T` on `(0, 1]`
//! decides where `h`, and hence `f`, turns around.

use serde::Serialize;

use crate::bracket::{find_root, RootOptions};
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::means::{self, check_exponent, GapCoordinate};

/// Below this `x`, `atanh(x) - x` is summed from its odd power series.
const ATANH_SERIES_CROSSOVER: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyParams {
    t: f64,
    s: f64,
    u: f64,
    /// `1 - u`, which is `4t(1 - t)` when built from `t`.
    one_minus_u: f64,
    #[serde(skip)]
    u_dd: DoubleDouble,
    #[serde(skip)]
    one_minus_u_dd: DoubleDouble,
}

impl FamilyParams {
    /// Parameters of `Q_{t,s}`: `t` in `[0, 1/2]`, `s >= 1`.
    pub fn new(t: f64, s: f64) -> Result<Self> {
        means::check_weight(t)?;
        check_exponent(s)?;
        let w = 1.0 - 2.0 * t;
        let w_dd = DoubleDouble::from_sum(1.0, -2.0 * t);
        // 1 - (1 - 2t)^2 = 4t(1 - t)
        let one_minus_u_dd = DoubleDouble::from_sum(1.0, -t) * (4.0 * t);
        Ok(Self {
            t,
            s,
            u: w * w,
            one_minus_u: one_minus_u_dd.to_f64(),
            u_dd: w_dd.square(),
            one_minus_u_dd,
        })
    }

    /// Parameters given directly by `u` in `[0, 1]`; `t = (1 - sqrt(u)) / 2`.
    pub fn from_u(u: f64, s: f64) -> Result<Self> {
        if !(u.is_finite() && (0.0..=1.0).contains(&u)) {
            return Err(Error::SquaredWeightOutOfRange(u));
        }
        check_exponent(s)?;
        Ok(Self {
            t: 0.5 * (1.0 - u.sqrt()),
            s,
            u,
            one_minus_u: 1.0 - u,
            u_dd: DoubleDouble::from_f64(u),
            one_minus_u_dd: DoubleDouble::from_sum(1.0, -u),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn one_minus_u(&self) -> f64 {
        self.one_minus_u
    }

    /// `3su`, whose position relative to 1 decides the sign of `T(0)`.
    pub fn three_su(&self) -> f64 {
        3.0 * self.s * self.u
    }

    /// `1 - u x^2` as `(1 - u) + u (1 - x)(1 + x)` once the product nears one.
    fn one_minus_u_x2(&self, x: f64) -> f64 {
        let ux2 = self.u * x * x;
        if ux2 < 0.5 {
            1.0 - ux2
        } else {
            self.one_minus_u + self.u * (1.0 - x) * (1.0 + x)
        }
    }

    fn ln_one_minus_u_x2(&self, x: f64) -> f64 {
        let ux2 = self.u * x * x;
        if ux2 < 0.5 {
            (-ux2).ln_1p()
        } else {
            self.one_minus_u_x2(x).ln()
        }
    }

    fn ln_one_minus_u_x2_dd(&self, x: f64) -> DoubleDouble {
        let x2 = DoubleDouble::from_product(x, x);
        let ux2 = self.u_dd * x2;
        if ux2.hi() < 0.5 {
            (-ux2).ln_1p()
        } else {
            let one_minus_x2 = DoubleDouble::from_sum(1.0, -x) * DoubleDouble::from_sum(1.0, x);
            (self.one_minus_u_dd + self.u_dd * one_minus_x2).ln()
        }
    }
}

fn check_open_unit(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::PointOutOfRange(x))
    }
}

/// `f_{u,s}(x) = ln(Q_{t,s} / I)` at gap `x`.
pub fn f(params: &FamilyParams, x: f64) -> Result<f64> {
    check_open_unit(x)?;
    Ok(f_unchecked(params, x))
}

pub(crate) fn f_unchecked(params: &FamilyParams, x: f64) -> f64 {
    let lr = means::log_ratio_i_over_a(GapCoordinate::new(x).expect("x in (0, 1)"));
    0.5 * params.s * params.ln_one_minus_u_x2(x) - lr
}

/// `f_{u,s}(x)` in double-double.
pub fn f_dd(params: &FamilyParams, x: f64) -> Result<DoubleDouble> {
    check_open_unit(x)?;
    Ok(f_dd_unchecked(params, x))
}

pub(crate) fn f_dd_unchecked(params: &FamilyParams, x: f64) -> DoubleDouble {
    params.ln_one_minus_u_x2_dd(x) * (0.5 * params.s) - means::log_ratio_i_over_a_dd(x)
}

/// `atanh(x) - x` without cancellation for small `x`.
fn atanh_minus_identity(x: f64) -> f64 {
    if x < ATANH_SERIES_CROSSOVER {
        let x2 = x * x;
        let mut power = x * x2;
        let mut sum = 0.0;
        let mut k = 3.0;
        loop {
            let term = power / k;
            sum += term;
            if term <= f64::EPSILON * 0.25 * sum {
                break;
            }
            power *= x2;
            k += 2.0;
        }
        sum
    } else {
        0.5 * (x.ln_1p() - (1.0 - x).ln()) - x
    }
}

/// `h_{u,s}(x)`, with `f'(x) = h(x) / x^2`.
pub fn h(params: &FamilyParams, x: f64) -> Result<f64> {
    check_open_unit(x)?;
    Ok(atanh_minus_identity(x) - params.s * params.u * x * x * x / params.one_minus_u_x2(x))
}

/// `h_{u,s}(1 - eps)`, evaluated from `eps` so that points closer to 1 than
/// one ulp remain distinct.
pub fn h_near_one(params: &FamilyParams, eps: f64) -> Result<f64> {
    if !(eps.is_finite() && eps > 0.0 && eps < 1.0) {
        return Err(Error::PointOutOfRange(eps));
    }
    let x = 1.0 - eps;
    // atanh(1 - eps) = ln((2 - eps) / eps) / 2
    let atanh = 0.5 * ((-0.5 * eps).ln_1p() + std::f64::consts::LN_2 - eps.ln());
    let denom = params.one_minus_u + params.u * eps * (2.0 - eps);
    Ok(atanh - x - params.s * params.u * x * x * x / denom)
}

/// `T_{u,s}(X)` by Horner's rule with fused multiply-adds.
pub fn trinomial_eval(params: &FamilyParams, x: f64) -> f64 {
    let [c2, c1, c0] = trinomial_coefficients(params);
    c2.mul_add(x, c1).mul_add(x, c0)
}

/// `[X^2, X, 1]` coefficients of `T_{u,s}`.
pub fn trinomial_coefficients(params: &FamilyParams) -> [f64; 3] {
    let (s, u) = (params.s, params.u);
    [
        (1.0 - s) * u * u,
        -(2.0 - 3.0 * s - s * u) * u,
        1.0 - 3.0 * s * u,
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrinomialKind {
    /// `u = 0`: `T` is the constant 1.
    Constant,
    Linear,
    Quadratic,
}

/// Real roots of `T_{u,s}` in the variable `X = x^2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrinomialRoots {
    pub kind: TrinomialKind,
    /// All real roots, ascending.
    pub roots: Vec<f64>,
    /// Roots inside `(0, 1]`.
    pub roots_in_unit: Vec<f64>,
    /// Smaller real root.
    pub z0: Option<f64>,
    /// Larger real root when there are two.
    pub z1: Option<f64>,
}

impl TrinomialRoots {
    fn from_roots(kind: TrinomialKind, mut roots: Vec<f64>) -> Self {
        roots.sort_by(f64::total_cmp);
        let roots_in_unit = roots
            .iter()
            .copied()
            .filter(|&r| r > 0.0 && r <= 1.0)
            .collect();
        let z0 = roots.first().copied();
        let z1 = if roots.len() == 2 {
            roots.last().copied()
        } else {
            None
        };
        Self {
            kind,
            roots,
            roots_in_unit,
            z0,
            z1,
        }
    }

    /// The root in `(0, 1]` when there is exactly one.
    pub fn unit_root(&self) -> Option<f64> {
        match self.roots_in_unit.as_slice() {
            [r] => Some(*r),
            _ => None,
        }
    }
}

/// Treat `T` as linear when the leading coefficient is this small relative to
/// the others.
const LINEAR_SWITCH: f64 = 1e-14;

pub fn trinomial_roots(params: &FamilyParams) -> TrinomialRoots {
    let (s, u) = (params.s, params.u);
    if u == 0.0 {
        return TrinomialRoots::from_roots(TrinomialKind::Constant, Vec::new());
    }
    let [c2, c1, c0] = trinomial_coefficients(params);
    let scale = c2.abs().max(c1.abs()).max(c0.abs());
    if c2.abs() < LINEAR_SWITCH * scale {
        let roots = if c1 != 0.0 {
            vec![-c0 / c1]
        } else {
            Vec::new()
        };
        return TrinomialRoots::from_roots(TrinomialKind::Linear, roots);
    }
    if u == 1.0 {
        // T_{1,s}(X) = (X - 1)((1 - s) X + 3s - 1)
        return TrinomialRoots::from_roots(
            TrinomialKind::Quadratic,
            vec![1.0, (3.0 * s - 1.0) / (s - 1.0)],
        );
    }
    let disc = c1.mul_add(c1, -4.0 * c2 * c0);
    if disc < 0.0 {
        // Only reachable through rounding; for s >= 1 the discriminant is
        // non-negative whenever T(0) and T(1) do not share the sign of c2.
        if disc > -1e-14 * c1 * c1 {
            return TrinomialRoots::from_roots(TrinomialKind::Quadratic, vec![-c1 / (2.0 * c2)]);
        }
        return TrinomialRoots::from_roots(TrinomialKind::Quadratic, Vec::new());
    }
    let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
    let roots = if q == 0.0 {
        vec![0.0, 0.0]
    } else {
        vec![q / c2, c0 / q]
    };
    TrinomialRoots::from_roots(TrinomialKind::Quadratic, roots)
}

/// The zero `y0` of `h_{u,s}` past the turning point `sqrt(X*)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub y0: f64,
    /// `1 - y0`, exact where `y0` itself rounds towards 1.
    pub one_minus_y0: f64,
    /// Square root of the unit root of `T`: where `h` stops decreasing.
    pub turning_point: f64,
    /// `h(y0)`.
    pub residual: f64,
}

/// Locates `y0` where `f_{u,s}` switches from decreasing to increasing.
///
/// Requires `3su > 1` and `u < 1`. `h` decreases from `h(0) = 0` on
/// `[0, x*]` with `x* = sqrt(X*)` and increases to `+inf` afterwards, so the
/// bracket is `(x*, 1)`. The search runs on `ln(1 - x)`, which resolves zeros
/// that lie closer to 1 than any double below 1.
pub fn critical_point(params: &FamilyParams) -> Result<CriticalPoint> {
    if params.u >= 1.0 {
        return Err(Error::NoCriticalPoint(
            "u = 1: h is decreasing on (0, 1) and f has no interior minimum".into(),
        ));
    }
    if params.three_su() <= 1.0 {
        return Err(Error::NoCriticalPoint(format!(
            "3su = {} <= 1: h is increasing and positive on (0, 1)",
            params.three_su()
        )));
    }
    let roots = trinomial_roots(params);
    let x_root = roots.unit_root().ok_or_else(|| {
        Error::NoCriticalPoint(format!("degenerate trinomial roots {:?}", roots.roots))
    })?;
    let turning_point = x_root.sqrt();
    let eps_hi = 1.0 - turning_point;
    let g = |z: f64| h_near_one(params, z.exp()).unwrap_or(f64::NAN);

    let z_hi = eps_hi.ln();
    if g(z_hi).is_nan() || g(z_hi) >= 0.0 {
        return Err(Error::Bracket(format!(
            "h is not negative at the turning point {turning_point}"
        )));
    }
    let mut z_lo = z_hi;
    loop {
        z_lo -= 2.0;
        if z_lo < f64::MIN_POSITIVE.ln() {
            return Err(Error::Bracket(
                "h stays negative down to the smallest representable 1 - x".into(),
            ));
        }
        if g(z_lo) > 0.0 {
            break;
        }
    }
    let root = find_root(
        g,
        z_lo,
        z_hi,
        RootOptions {
            abs_tol: 1e-15,
            rel_tol: 0.0,
            max_iter: 200,
        },
    )?;
    let one_minus_y0 = root.x.exp();
    Ok(CriticalPoint {
        y0: 1.0 - one_minus_y0,
        one_minus_y0,
        turning_point,
        residual: h_near_one(params, one_minus_y0)?,
    })
}

/// `lim_{x -> 1-} f_{u,s}(x) = ln(e (1 - u)^{s/2} / 2)`, `-inf` at `u = 1`.
pub fn f_limit_at_one(params: &FamilyParams) -> f64 {
    if params.one_minus_u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    (1.0 - std::f64::consts::LN_2) + 0.5 * params.s * params.one_minus_u.ln()
}

/// `g_c(x) = ln(A / I)(x) - c x^2`.
pub fn g(coef: f64, x: f64) -> Result<f64> {
    check_coef(coef)?;
    check_open_unit(x)?;
    Ok(g_unchecked(coef, x))
}

pub(crate) fn g_unchecked(coef: f64, x: f64) -> f64 {
    -means::log_ratio_i_over_a(GapCoordinate::new(x).expect("x in (0, 1)")) - coef * x * x
}

pub fn g_dd(coef: f64, x: f64) -> Result<DoubleDouble> {
    check_coef(coef)?;
    check_open_unit(x)?;
    Ok(g_dd_unchecked(coef, x))
}

pub(crate) fn g_dd_unchecked(coef: f64, x: f64) -> DoubleDouble {
    -means::log_ratio_i_over_a_dd(x) - DoubleDouble::from_product(x, x) * coef
}

fn check_coef(coef: f64) -> Result<()> {
    if coef.is_finite() && coef > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "coefficient".into(),
            reason: format!("must be a finite positive real, got {coef}"),
        })
    }
}
