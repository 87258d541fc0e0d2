//! Counterexample search and experimental recovery of the sharp thresholds.

use crate::error::{Error, Result};
use crate::thresholds::sharp_thresholds;

use super::checks::{FamilyCheck, Inequality};
use super::{settled_margin, verify, GridSpec, Side, Witness};

/// Smallest tolerance accepted by [`empirical_threshold`].
pub const MIN_THRESHOLD_TOL: f64 = 1e-8;

/// Candidate gaps for a lower-side failure: `1 - 10^{-k/8}`, reaching 15
/// digits towards 1, where the limit `f(1-)` turns positive first.
fn lower_candidates() -> impl Iterator<Item = f64> {
    (17..=120).map(|k| 1.0 - 10f64.powf(-f64::from(k) / 8.0))
}

/// Candidate gaps for an upper-side failure: `10^{-k/8}` from about 0.075
/// down to `1e-12`, where the negative `x^2` term of `f` dominates.
fn upper_candidates() -> impl Iterator<Item = f64> {
    (9..=96).map(|k| 10f64.powf(-f64::from(k) / 8.0))
}

/// Finds a gap at which the `side` inequality fails for `Q_{t,s}`.
///
/// Requires `t` strictly outside the sharp set for that side. The targeted
/// candidates are tried first; if none of them shows a reversal the default
/// grid is scanned. The returned witness is the most negative margin found,
/// confirmed in double-double.
pub fn falsify(t: f64, s: f64, side: Side) -> Result<Witness> {
    let th = sharp_thresholds(s)?;
    let check = FamilyCheck::new(t, s, side)?;
    let outside = match side {
        Side::Lower => t > th.p,
        Side::Upper => t < th.q,
    };
    if !outside {
        return Err(Error::NotOutsideSharpInterval {
            t,
            side: side.to_string(),
            threshold: match side {
                Side::Lower => th.p,
                Side::Upper => th.q,
            },
        });
    }

    let candidates: Vec<f64> = match side {
        Side::Lower => lower_candidates().collect(),
        Side::Upper => upper_candidates().collect(),
    };
    if let Some(w) = most_negative(&check, &candidates) {
        return Ok(w);
    }
    let grid = GridSpec::default();
    if let Some(w) = verify(&check, &grid)?.witness.filter(Witness::confirmed) {
        return Ok(w);
    }
    Err(Error::WitnessNotFound(format!(
        "t = {t}, s = {s}, {side} side: {} targeted candidates and {} grid points all \
         kept the inequality; the failure lies beyond double-precision resolution of the gap",
        candidates.len(),
        grid.count
    )))
}

fn most_negative(check: &dyn Inequality, xs: &[f64]) -> Option<Witness> {
    let mut best: Option<(f64, f64)> = None;
    for &x in xs {
        let (m, _) = settled_margin(check, x);
        if m < 0.0 && best.is_none_or(|(bm, _)| m < bm) {
            best = Some((m, x));
        }
    }
    best.map(|(_, x)| Witness::at(check, x))
        .filter(Witness::confirmed)
}

/// Recovers the endpoint of `L_s` (lower) or `U_s` (upper) by bisection on
/// `t`, using "the grid check holds" as the predicate.
///
/// The result is the last `t` known to hold, so it sits on the holding side
/// of the boundary, up to `tol` away. Because the grid cannot see gaps
/// closer to 1 than its end offset, the lower-side estimate is biased
/// outward by roughly `f`'s approach rate there times that offset, about
/// `1e-8` for the default grid.
pub fn empirical_threshold(s: f64, side: Side, grid: &GridSpec, tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol >= MIN_THRESHOLD_TOL) {
        return Err(Error::InvalidParameter {
            name: "tol".into(),
            reason: format!("must be at least {MIN_THRESHOLD_TOL:e}, got {tol}"),
        });
    }
    sharp_thresholds(s)?;
    grid.validate()?;
    let holds =
        |t: f64| -> Result<bool> { Ok(verify(&FamilyCheck::new(t, s, side)?, grid)?.holds()) };

    // (holding end, failing end)
    let (mut good, mut bad) = match side {
        Side::Lower => (0.0, 0.5),
        Side::Upper => (0.5, 0.0),
    };
    if !holds(good)? || holds(bad)? {
        return Err(Error::Bracket(format!(
            "the {side} inequality does not change verdict across t in [0, 1/2] for s = {s}"
        )));
    }
    while (bad - good).abs() > tol {
        let mid = 0.5 * (good + bad);
        if holds(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}
