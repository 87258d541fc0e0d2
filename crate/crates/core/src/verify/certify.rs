//! Sign certification of `f_{u,s}` on compact gap intervals.
//!
//! On `[lo, hi]` the three pieces of
//! `f = 1 - atanh(x)/x - ln(1 - x^2)/2 + (s/2) ln(1 - u x^2)`
//! are monotone: `atanh(x)/x` and `-ln(1 - x^2)/2` increase with `x` and
//! `(s/2) ln(1 - u x^2)` decreases. Each piece is enclosed at
//! the endpoint that bounds it, so the whole enclosure needs interval
//! evaluations at just two points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::means::{check_exponent, check_weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Positive,
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "negative" | "neg" => Ok(Sign::Negative),
            "positive" | "pos" => Ok(Sign::Positive),
            _ => Err(Error::InvalidParameter {
                name: "sign".into(),
                reason: format!("expected `negative` or `positive`, got `{s}`"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    ProvedNegative,
    ProvedPositive,
    Split,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertificateNode {
    pub lo: f64,
    pub hi: f64,
    /// Enclosure of `f` over `[lo, hi]`.
    pub bound: Interval,
    pub status: NodeStatus,
    pub depth: u32,
}

impl CertificateNode {
    pub fn is_leaf(&self) -> bool {
        self.status != NodeStatus::Split
    }
}

/// Subdivision tree in depth-first pre-order, left half first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub nodes: Vec<CertificateNode>,
    /// Every leaf carries the requested sign.
    pub proved: bool,
    pub sign: Sign,
}

impl Certificate {
    pub fn leaves(&self) -> impl Iterator<Item = &CertificateNode> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }
}

struct Enclosure {
    half_s: Interval,
    u: Interval,
}

impl Enclosure {
    fn new(t: f64, s: f64) -> Self {
        let w = Interval::point(1.0) - Interval::point(2.0 * t);
        Self {
            half_s: Interval::point(0.5 * s),
            u: w.square(),
        }
    }

    /// `atanh(x) / x = ln(1 + 2x / (1 - x)) / (2x)`.
    fn atanh_over_x(x: f64) -> Interval {
        let px = Interval::point(x);
        let ratio = Interval::point(2.0 * x) / (Interval::point(1.0) - px);
        let l = ratio.ln_1p().unwrap_or_else(Interval::entire);
        l / Interval::point(2.0 * x)
    }

    /// `-ln(1 - x^2) / 2`.
    fn neg_half_log(x: f64) -> Interval {
        let one = Interval::point(1.0);
        let px = Interval::point(x);
        let prod = (one - px) * (one + px);
        let l = Interval::new(prod.lo.max(f64::MIN_POSITIVE), prod.hi)
            .ln()
            .unwrap_or_else(Interval::entire);
        -(l * Interval::point(0.5))
    }

    /// `(s/2) ln(1 - u x^2)`.
    fn weighted_log(&self, x: f64) -> Interval {
        let ux2 = self.u * Interval::point(x).square();
        let l = (-ux2).ln_1p().unwrap_or_else(Interval::entire);
        self.half_s * l
    }

    fn bound(&self, lo: f64, hi: f64) -> Interval {
        let one = Interval::point(1.0);
        let low = one - Self::atanh_over_x(hi) + Self::neg_half_log(lo) + self.weighted_log(hi);
        let high = one - Self::atanh_over_x(lo) + Self::neg_half_log(hi) + self.weighted_log(lo);
        if low.lo.is_nan() || high.hi.is_nan() {
            return Interval::entire();
        }
        Interval {
            lo: low.lo,
            hi: high.hi,
        }
    }
}

/// Tries to prove that `f_{(1-2t)^2, s}` has the given sign on
/// `[x_lo, x_hi]` by bisection, creating at most `budget` nodes.
///
/// `proved` is false when the budget ran out (inconclusive leaves) or when
/// some piece was shown to carry the opposite sign.
pub fn certify_sign(
    t: f64,
    s: f64,
    x_lo: f64,
    x_hi: f64,
    sign: Sign,
    budget: usize,
) -> Result<Certificate> {
    check_weight(t)?;
    check_exponent(s)?;
    if !(x_lo > 0.0 && x_hi < 1.0 && x_lo < x_hi) {
        return Err(Error::InvalidParameter {
            name: "interval".into(),
            reason: format!("need 0 < x_lo < x_hi < 1, got [{x_lo}, {x_hi}]"),
        });
    }
    if budget == 0 {
        return Err(Error::InvalidParameter {
            name: "budget".into(),
            reason: "must be positive".into(),
        });
    }

    let enc = Enclosure::new(t, s);
    let mut nodes = Vec::new();
    let mut stack = vec![(x_lo, x_hi, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let bound = enc.bound(lo, hi);
        let mid = 0.5 * (lo + hi);
        let status = if bound.hi < 0.0 {
            NodeStatus::ProvedNegative
        } else if bound.lo > 0.0 {
            NodeStatus::ProvedPositive
        } else if nodes.len() + 1 + stack.len() + 2 <= budget && lo < mid && mid < hi {
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
            NodeStatus::Split
        } else {
            NodeStatus::Inconclusive
        };
        nodes.push(CertificateNode {
            lo,
            hi,
            bound,
            status,
            depth,
        });
    }

    let wanted = match sign {
        Sign::Negative => NodeStatus::ProvedNegative,
        Sign::Positive => NodeStatus::ProvedPositive,
    };
    let proved = nodes
        .iter()
        .filter(|n| n.is_leaf())
        .all(|n| n.status == wanted);
    Ok(Certificate {
        nodes,
        proved,
        sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{f, FamilyParams};

    #[test]
    fn enclosure_contains_point_values() {
        let enc = Enclosure::new(0.2, 2.0);
        let p = FamilyParams::new(0.2, 2.0).unwrap();
        for (lo, hi) in [(0.01, 0.02), (0.3, 0.5), (0.9, 0.99)] {
            let b = enc.bound(lo, hi);
            for x in [lo, 0.5 * (lo + hi), hi] {
                assert!(b.contains(f(&p, x).unwrap()), "[{lo}, {hi}] at {x}");
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let c = certify_sign(0.2, 2.0, 0.01, 0.99, Sign::Negative, 3).unwrap();
        assert!(!c.proved);
        assert!(c.nodes.len() <= 3);
        assert!(c.leaves().any(|n| n.status == NodeStatus::Inconclusive));
    }

    #[test]
    fn wrong_sign_is_not_proved() {
        let c = certify_sign(0.1, 2.0, 0.2, 0.8, Sign::Positive, 1000).unwrap();
        assert!(!c.proved);
        assert!(c.leaves().any(|n| n.status == NodeStatus::ProvedNegative));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(certify_sign(0.1, 2.0, 0.0, 0.5, Sign::Negative, 10).is_err());
        assert!(certify_sign(0.1, 2.0, 0.5, 0.4, Sign::Negative, 10).is_err());
        assert!(certify_sign(0.1, 2.0, 0.1, 0.5, Sign::Negative, 0).is_err());
        assert!("zero".parse::<Sign>().is_err());
    }
}
