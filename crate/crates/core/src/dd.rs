//! Double-double arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`, giving
//! roughly 106 bits of significand. Only the operations needed to re-evaluate
//! the mean comparisons at twice the working precision are provided: the four
//! arithmetic operations, `sqrt`, `exp`, `exp_m1`, `ln`, `ln_1p` and `atanh`.

use serde::Serialize;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `ln 2` split into a double-double.
pub const LN_2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

/// Relative size below which a series term no longer changes a double-double sum.
const SERIES_EPS: f64 = 1e-34;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Builds a normalized value from two doubles whose exact sum is wanted.
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    /// Exact product of two doubles.
    pub fn from_product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Nearest double (up to the usual double rounding of `hi + lo`).
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    pub fn abs(self) -> Self {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    pub fn mul_pow2(self, k: i32) -> Self {
        let scale = 2f64.powi(k);
        Self {
            hi: self.hi * scale,
            lo: self.lo * scale,
        }
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::ZERO
            } else {
                Self::from_f64(f64::NAN)
            };
        }
        // One Newton step from the double square root doubles the precision.
        let x = self.hi.sqrt();
        let x2 = Self::from_product(x, x);
        let correction = (self - x2).hi / (2.0 * x);
        Self::from_sum(x, correction)
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.78 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Self::ZERO;
        }
        let k = (self.hi / LN_2.hi).round();
        let r = self - LN_2 * k;
        let e = expm1_reduced(r);
        (e + 1.0).mul_pow2(k as i32)
    }

    /// `exp(x) - 1`, accurate in the relative sense for small `x`.
    pub fn exp_m1(self) -> Self {
        if self.hi.abs() < 0.5 {
            expm1_reduced(self)
        } else {
            self.exp() - 1.0
        }
    }

    /// Natural logarithm of a positive value.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(if self.hi == 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            });
        }
        if (self.hi - 1.0).abs() < 0.5 {
            return (self - 1.0).ln_1p();
        }
        let y0 = self.hi.ln();
        // y1 = y0 + a * exp(-y0) - 1
        let y = Self::from_f64(y0);
        y + self * (-y).exp() - 1.0
    }

    /// `ln(1 + self)`, accurate in the relative sense for small arguments.
    pub fn ln_1p(self) -> Self {
        if self.hi.abs() >= 0.5 {
            return (self + 1.0).ln();
        }
        if self.hi == 0.0 {
            return self;
        }
        let y0 = self.hi.ln_1p();
        let y = Self::from_f64(y0);
        let em1 = y.exp_m1();
        // Newton on exp_m1(y) = w.
        y - (em1 - self) / (em1 + 1.0)
    }

    /// Inverse hyperbolic tangent for `|self| < 1`.
    pub fn atanh(self) -> Self {
        let w = self.mul_pow2(1) / (Self::ONE - self);
        w.ln_1p().mul_pow2(-1)
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::ONE;
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }
}

/// Taylor series of `exp(r) - 1` after halving `r` until it is tiny, then
/// undoing the halvings with `e -> e * (2 + e)` so the small result keeps its
/// relative accuracy.
fn expm1_reduced(r: DoubleDouble) -> DoubleDouble {
    const HALVINGS: i32 = 10;
    let r = r.mul_pow2(-HALVINGS);
    let mut term = r;
    let mut sum = r;
    let mut n = 1.0;
    loop {
        n += 1.0;
        term = term * r / n;
        sum = sum + term;
        if term.hi.abs() <= SERIES_EPS * sum.hi.abs() || n > 40.0 {
            break;
        }
    }
    for _ in 0..HALVINGS {
        sum = sum * (sum + 2.0);
    }
    sum
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Add<f64> for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: f64) -> Self {
        let (s, e) = two_sum(self.hi, rhs);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Sub<f64> for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: f64) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Mul<f64> for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        let (p, e) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p, e + self.lo * rhs);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * q1;
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * q2;
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + q3
    }
}

impl Div<f64> for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self / Self::from_f64(rhs)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} + {:e}", self.hi, self.lo)
    }
}
