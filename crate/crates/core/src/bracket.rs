//! Safeguarded bracketing root finder for scalar functions.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 0.0,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub x: f64,
    /// Final bracket; the sign change lies in `[lo, hi]`.
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Finds a zero of `f` inside `[lo, hi]`, given `f(lo)` and `f(hi)` of
/// opposite sign.
///
/// Each step tries an Illinois false-position point and falls back to
/// bisection whenever the bracket failed to halve over the previous step, so
/// the bracket width at least halves every two iterations.
pub fn find_root<F>(f: F, lo: f64, hi: f64, opts: RootOptions) -> Result<Root>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket(format!(
            "function is NaN at an endpoint of [{a}, {b}]"
        )));
    }
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            lo: a,
            hi: a,
            value: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            lo: b,
            hi: b,
            value: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a}, {b}]: f = {fa:e}, {fb:e}"
        )));
    }

    // Illinois bookkeeping: which end was retained last time.
    let mut retained = 0i8;
    let mut last_width = b - a;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        let width = b - a;
        let scale = a.abs().max(b.abs());
        if width <= opts.abs_tol + opts.rel_tol * scale {
            break;
        }
        iterations += 1;

        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) || width > 0.5 * last_width {
            x = a + 0.5 * width;
        }
        last_width = width;
        if !(x > a && x < b) {
            // Bracket is down to adjacent doubles.
            break;
        }

        let fx = f(x);
        if fx == 0.0 {
            return Ok(Root {
                x,
                lo: x,
                hi: x,
                value: 0.0,
                iterations,
            });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if retained == 1 {
                fb *= 0.5;
            }
            retained = 1;
        } else {
            b = x;
            fb = fx;
            if retained == -1 {
                fa *= 0.5;
            }
            retained = -1;
        }
    }

    // Report the endpoint with the smaller residual, re-evaluated without the
    // Illinois down-weighting.
    let (ra, rb) = (f(a), f(b));
    let (x, value) = if ra.abs() <= rb.abs() {
        (a, ra)
    } else {
        (b, rb)
    };
    Ok(Root {
        x,
        lo: a,
        hi: b,
        value,
        iterations,
    })
}
