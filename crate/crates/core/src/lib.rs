//! Identric-mean bounds through the `Q_{t,s}` family.
//!
//! `Q_{t,s}(a, b) = G^s(ta + (1-t)b, tb + (1-t)a) A^{1-s}(a, b)` sits below
//! the identric mean `I` for `t <= p_s` and above it for `t >= q_s`, both
//! sharp. This crate evaluates the means stably, computes `p_s` and `q_s`,
//! and checks those and related bounds numerically.

pub mod bracket;
pub mod dd;
pub mod error;
pub mod family;
pub mod interval;
pub mod means;
pub mod thresholds;
pub mod verify;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use family::FamilyParams;
pub use means::{
    arithmetic_mean, geometric_mean, harmonic_mean, identric_mean, q_mean, GapCoordinate,
    PositivePair,
};
pub use thresholds::{sharp_thresholds, Membership, ThresholdSet};
pub use verify::{GridSpec, Side, Verdict, VerificationReport, Witness};
