//! Outward-rounded interval arithmetic on doubles.
//!
//! Rounding modes are not available, so every computed endpoint is pushed one
//! ulp outward with `next_down` / `next_up`. Elementary functions are only
//! provided for monotone cases, enclosed by evaluating at the endpoints and
//! widening by two ulps on each side, which covers the documented error of
//! the platform `log` and `log1p`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn entire() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Natural log, `None` unless the interval is strictly positive.
    pub fn ln(self) -> Option<Self> {
        if self.lo <= 0.0 {
            return None;
        }
        Some(Self {
            lo: self.lo.ln().next_down().next_down(),
            hi: self.hi.ln().next_up().next_up(),
        })
    }

    /// `ln(1 + x)`, `None` unless the interval lies above -1.
    pub fn ln_1p(self) -> Option<Self> {
        if self.lo <= -1.0 {
            return None;
        }
        Some(Self {
            lo: self.lo.ln_1p().next_down().next_down(),
            hi: self.hi.ln_1p().next_up().next_up(),
        })
    }

    pub fn square(self) -> Self {
        if self.lo >= 0.0 {
            Self {
                lo: (self.lo * self.lo).next_down().max(0.0),
                hi: (self.hi * self.hi).next_up(),
            }
        } else if self.hi <= 0.0 {
            (-self).square()
        } else {
            let m = self.lo.abs().max(self.hi.abs());
            Self {
                lo: 0.0,
                hi: (m * m).next_up(),
            }
        }
    }

    /// Division; `None` when the denominator contains zero.
    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        if rhs.contains_zero() {
            return None;
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        Some(Self {
            lo: min4(q).next_down(),
            hi: max4(q).next_up(),
        })
    }
}

fn min4(v: [f64; 4]) -> f64 {
    v.into_iter().fold(f64::INFINITY, f64::min)
}

fn max4(v: [f64; 4]) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Self::point(x)
    }
}

impl Neg for Interval {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Add for Interval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            lo: (self.lo + rhs.lo).next_down(),
            hi: (self.hi + rhs.hi).next_up(),
        }
    }
}

impl Sub for Interval {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            lo: (self.lo - rhs.hi).next_down(),
            hi: (self.hi - rhs.lo).next_up(),
        }
    }
}

impl Mul for Interval {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        Self {
            lo: min4(p).next_down(),
            hi: max4(p).next_up(),
        }
    }
}

impl Div for Interval {
    type Output = Self;
    /// A denominator containing zero yields the entire line.
    fn div(self, rhs: Self) -> Self {
        self.checked_div(rhs).unwrap_or_else(Self::entire)
    }
}
