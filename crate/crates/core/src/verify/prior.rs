//! Earlier convex-power bounds between `A`, `G` and `I`.

use serde::Serialize;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

use super::checks::ConvexPowerCheck;
use super::{verify, GridSpec, Side, VerificationReport};

/// Weight on `A^p` in the two-thirds/one-third combination, to double-double
/// accuracy.
pub fn kou_weight() -> DoubleDouble {
    DoubleDouble::from_f64(2.0) / 3.0
}

/// `ln(3/2) / ln(e/2)`: from here on `I^p < (2/3) A^p + (1/3) G^p`.
pub fn kou_forward_threshold() -> f64 {
    1.5f64.ln() / (1.0 - std::f64::consts::LN_2)
}

/// `6/5`: up to here the reverse inequality holds.
pub fn kou_reverse_threshold() -> f64 {
    1.2
}

/// Grid check of `alpha A^p + (1 - alpha) G^p < I^p` (lower) or
/// `I^p < alpha A^p + (1 - alpha) G^p` (upper) on the default grid.
///
/// `alpha` may be given in double-double when the constant of interest is
/// not a double.
pub fn verify_convex_power_bound(
    p_exp: f64,
    alpha: impl Into<DoubleDouble>,
    side: Side,
) -> Result<VerificationReport> {
    verify_convex_power_bound_on(p_exp, alpha, side, &GridSpec::default())
}

pub fn verify_convex_power_bound_on(
    p_exp: f64,
    alpha: impl Into<DoubleDouble>,
    side: Side,
    grid: &GridSpec,
) -> Result<VerificationReport> {
    if !(p_exp.is_finite() && p_exp >= 1.0) {
        return Err(Error::InvalidParameter {
            name: "p_exp".into(),
            reason: format!("must be a finite real >= 1, got {p_exp}"),
        });
    }
    verify(&ConvexPowerCheck::new(p_exp, alpha, side)?, grid)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KouClass {
    ForwardHolds,
    ReverseHolds,
    Neither,
    /// Both directions held on the grid, which only a too-coarse grid allows.
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KouReport {
    pub p_exp: f64,
    pub forward: VerificationReport,
    pub reverse: VerificationReport,
    pub classification: KouClass,
    pub forward_threshold: f64,
    pub reverse_threshold: f64,
}

/// Checks `I^p < (2/3) A^p + (1/3) G^p` and its reverse on the default grid
/// and classifies `p` by which of them held.
pub fn verify_kou_power(p_exp: f64) -> Result<KouReport> {
    verify_kou_power_on(p_exp, &GridSpec::default())
}

pub fn verify_kou_power_on(p_exp: f64, grid: &GridSpec) -> Result<KouReport> {
    let forward = verify(
        &ConvexPowerCheck::named("kou-forward", p_exp, kou_weight(), Side::Upper)?,
        grid,
    )?;
    let reverse = verify(
        &ConvexPowerCheck::named("kou-reverse", p_exp, kou_weight(), Side::Lower)?,
        grid,
    )?;
    let classification = match (forward.holds(), reverse.holds()) {
        (true, false) => KouClass::ForwardHolds,
        (false, true) => KouClass::ReverseHolds,
        (false, false) => KouClass::Neither,
        (true, true) => KouClass::Both,
    };
    Ok(KouReport {
        p_exp,
        forward,
        reverse,
        classification,
        forward_threshold: kou_forward_threshold(),
        reverse_threshold: kou_reverse_threshold(),
    })
}
