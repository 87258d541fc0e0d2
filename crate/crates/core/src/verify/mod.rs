//! Grid verification, counterexample search, threshold recovery and interval
//! certification of the inequalities.
//!
//! Every check is a margin function (see [`Inequality`]) sampled on a
//! [`GridSpec`]. Margins that come out within [`RECHECK_BELOW`] of zero are
//! recomputed in double-double and the extended value is the one reported,
//! so a `Violated` verdict is never a rounding artifact of the working path.

mod certify;
mod checks;
mod grid;
mod prior;
mod registry;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub use certify::{certify_sign, Certificate, CertificateNode, NodeStatus, Sign};
pub use checks::{ConvexPowerCheck, ExponentialCheck, FamilyCheck, Inequality};
pub use grid::{GridSpec, Spacing, DEFAULT_END_OFFSET, DEFAULT_GRID_POINTS};
pub use prior::{
    kou_forward_threshold, kou_reverse_threshold, kou_weight, verify_convex_power_bound,
    verify_convex_power_bound_on, verify_kou_power, verify_kou_power_on, KouClass, KouReport,
};
pub use registry::{CheckArgs, CheckFactory, CheckRegistry};
pub use search::{empirical_threshold, falsify, MIN_THRESHOLD_TOL};

/// Margins below this magnitude are recomputed at extended precision.
pub const RECHECK_BELOW: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    /// Numeric tag used in parameter echoes: 0 for lower, 1 for upper.
    pub fn code(self) -> f64 {
        match self {
            Side::Lower => 0.0,
            Side::Upper => 1.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lower" => Ok(Side::Lower),
            "upper" => Ok(Side::Upper),
            _ => Err(Error::InvalidParameter {
                name: "side".into(),
                reason: format!("expected `lower` or `upper`, got `{s}`"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsOnGrid,
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HoldsOnGrid => "holds_on_grid",
            Verdict::Violated => "violated",
        })
    }
}

/// A gap where the inequality is reversed, with the pair realizing it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub x: f64,
    pub a: f64,
    pub b: f64,
    pub margin_working: f64,
    /// The double-double margin, rounded to a double.
    pub margin_extended: f64,
}

impl Witness {
    pub(crate) fn at(check: &dyn Inequality, x: f64) -> Self {
        Self {
            x,
            a: 1.0 + x,
            b: 1.0 - x,
            margin_working: check.margin(x),
            margin_extended: check.margin_extended(x).to_f64(),
        }
    }

    /// Whether the extended-precision margin confirms the reversal.
    pub fn confirmed(&self) -> bool {
        self.margin_extended < 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub verdict: Verdict,
    /// Smallest margin over the grid; negative iff violated.
    pub worst_margin: f64,
    pub worst_x: f64,
    pub witness: Option<Witness>,
    pub samples: usize,
    /// Grid points whose margin was recomputed at extended precision.
    pub rechecked: usize,
    pub grid: GridSpec,
    pub parameters: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsOnGrid
    }
}

#[derive(Clone, Copy)]
struct Sample {
    index: usize,
    margin: f64,
    rechecked: usize,
}

impl Sample {
    /// Smaller margin wins, then smaller index, so the reduction does not
    /// depend on how the grid was split.
    fn worse(self, other: Self) -> Self {
        let rechecked = self.rechecked + other.rechecked;
        let pick = match self.margin.total_cmp(&other.margin) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => {
                if self.index <= other.index {
                    self
                } else {
                    other
                }
            }
        };
        Self { rechecked, ..pick }
    }
}

/// Margin of `check` at `x`, rechecked in double-double near zero.
/// Returns the reported margin and whether the recheck ran.
pub fn settled_margin(check: &dyn Inequality, x: f64) -> (f64, bool) {
    let m = check.margin(x);
    if m.is_finite() && m.abs() >= RECHECK_BELOW {
        (m, false)
    } else {
        let ext = check.margin_extended(x);
        // A zero extended margin with a nonzero tail still carries a sign.
        let v = ext.to_f64();
        let v = if v == 0.0 { ext.lo() } else { v };
        (v, true)
    }
}

/// Samples `check` on `grid` in parallel.
pub fn verify(check: &dyn Inequality, grid: &GridSpec) -> Result<VerificationReport> {
    grid.validate()?;
    let points = grid.points();
    let worst = points
        .par_iter()
        .enumerate()
        .map(|(index, &x)| {
            let (margin, rechecked) = settled_margin(check, x);
            Sample {
                index,
                margin,
                rechecked: usize::from(rechecked),
            }
        })
        .reduce_with(Sample::worse)
        .expect("grid has at least two points");

    let worst_x = points[worst.index];
    if worst.margin.is_nan() {
        return Err(Error::NonFiniteMargin {
            check: check.name().to_string(),
            x: worst_x,
            margin: worst.margin,
        });
    }
    let violated = worst.margin < 0.0;
    Ok(VerificationReport {
        check: check.name().to_string(),
        verdict: if violated {
            Verdict::Violated
        } else {
            Verdict::HoldsOnGrid
        },
        worst_margin: worst.margin,
        worst_x,
        witness: violated.then(|| Witness::at(check, worst_x)),
        samples: points.len(),
        rechecked: worst.rechecked,
        grid: *grid,
        parameters: check.parameters(),
    })
}

/// Grid check of `Q_{t,s} < I` (lower) or `I < Q_{t,s}` (upper).
pub fn verify_family_inequality(
    t: f64,
    s: f64,
    side: Side,
    grid: &GridSpec,
) -> Result<VerificationReport> {
    verify(&FamilyCheck::new(t, s, side)?, grid)
}

/// Grid check of `exp(p v^2) < A/I < exp(q v^2)`.
pub fn verify_exponential_bounds(
    p_coef: f64,
    q_coef: f64,
    grid: &GridSpec,
) -> Result<VerificationReport> {
    verify(&ExponentialCheck::new(p_coef, q_coef)?, grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_round_trips_through_text() {
        for side in [Side::Lower, Side::Upper] {
            assert_eq!(side.to_string().parse::<Side>().unwrap(), side);
        }
        assert!("sideways".parse::<Side>().is_err());
    }

    #[test]
    fn reduction_prefers_smaller_index_on_ties() {
        let a = Sample {
            index: 3,
            margin: -1.0,
            rechecked: 1,
        };
        let b = Sample {
            index: 1,
            margin: -1.0,
            rechecked: 0,
        };
        assert_eq!(a.worse(b).index, 1);
        assert_eq!(b.worse(a).index, 1);
        assert_eq!(a.worse(b).rechecked, 1);
    }

    #[test]
    fn interior_family_parameters_hold() {
        let grid = GridSpec::refined(500);
        let r = verify_family_inequality(0.1, 2.0, Side::Lower, &grid).unwrap();
        assert!(r.holds());
        assert!(r.witness.is_none());
        assert!(r.worst_margin >= 0.0);
        let r = verify_family_inequality(0.1, 2.0, Side::Upper, &grid).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        let w = r.witness.unwrap();
        assert!(w.confirmed());
        assert_eq!(w.a, 1.0 + w.x);
    }
}
