//! Checks registered by name, so front ends can select them at run time.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::thresholds::exponential_bound_constants;

use super::checks::{ConvexPowerCheck, ExponentialCheck, FamilyCheck, Inequality};
use super::prior::kou_weight;
use super::Side;

/// Inputs a check may draw on; each check reads only what it needs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct CheckArgs {
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub side: Option<Side>,
    pub p_exp: Option<f64>,
    /// Double-double so that weights like 2/3 are carried past a double.
    pub weight: Option<DoubleDouble>,
    pub p_coef: Option<f64>,
    pub q_coef: Option<f64>,
}

impl CheckArgs {
    fn require(value: Option<f64>, name: &str, check: &str) -> Result<f64> {
        value.ok_or_else(|| Error::InvalidParameter {
            name: name.into(),
            reason: format!("required by `{check}`"),
        })
    }

    fn require_side(&self, check: &str) -> Result<Side> {
        self.side.ok_or_else(|| Error::InvalidParameter {
            name: "side".into(),
            reason: format!("required by `{check}`"),
        })
    }
}

pub type CheckFactory = Box<dyn Fn(&CheckArgs) -> Result<Box<dyn Inequality>> + Send + Sync>;

pub struct CheckRegistry {
    factories: BTreeMap<String, (String, CheckFactory)>,
}

impl CheckRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    /// Registry holding every built-in check.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(
            "family",
            "Q_{t,s} < I (lower) or I < Q_{t,s} (upper); needs t, s, side",
            Box::new(|a| {
                let t = CheckArgs::require(a.t, "t", "family")?;
                let s = CheckArgs::require(a.s, "s", "family")?;
                Ok(Box::new(FamilyCheck::new(t, s, a.require_side("family")?)?))
            }),
        );
        r.register(
            "exponential",
            "exp(p v^2) < A/I < exp(q v^2); p, q default to the sharp constants",
            Box::new(|a| {
                let c = exponential_bound_constants();
                Ok(Box::new(ExponentialCheck::new(
                    a.p_coef.unwrap_or(c.lower),
                    a.q_coef.unwrap_or(c.upper),
                )?))
            }),
        );
        r.register(
            "convex-power",
            "w A^p + (1-w) G^p < I^p (lower) or the reverse (upper); needs p_exp, weight, side",
            Box::new(|a| {
                let p = CheckArgs::require(a.p_exp, "p_exp", "convex-power")?;
                let w = a.weight.ok_or_else(|| Error::InvalidParameter {
                    name: "weight".into(),
                    reason: "required by `convex-power`".into(),
                })?;
                Ok(Box::new(ConvexPowerCheck::new(
                    p,
                    w,
                    a.require_side("convex-power")?,
                )?))
            }),
        );
        r.register(
            "kou-forward",
            "I^p < (2/3) A^p + (1/3) G^p; needs p_exp",
            Box::new(|a| {
                let p = CheckArgs::require(a.p_exp, "p_exp", "kou-forward")?;
                Ok(Box::new(ConvexPowerCheck::named(
                    "kou-forward",
                    p,
                    kou_weight(),
                    Side::Upper,
                )?))
            }),
        );
        r.register(
            "kou-reverse",
            "(2/3) A^p + (1/3) G^p < I^p; needs p_exp",
            Box::new(|a| {
                let p = CheckArgs::require(a.p_exp, "p_exp", "kou-reverse")?;
                Ok(Box::new(ConvexPowerCheck::named(
                    "kou-reverse",
                    p,
                    kou_weight(),
                    Side::Lower,
                )?))
            }),
        );
        r
    }

    /// Adds or replaces a check.
    pub fn register(&mut self, name: &str, summary: &str, factory: CheckFactory) {
        self.factories
            .insert(name.to_string(), (summary.to_string(), factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn summary(&self, name: &str) -> Option<&str> {
        self.factories.get(name).map(|(s, _)| s.as_str())
    }

    pub fn build(&self, name: &str, args: &CheckArgs) -> Result<Box<dyn Inequality>> {
        let (_, factory) = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownCheck(name.to_string()))?;
        factory(args)
    }
}

impl Default for CheckRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
