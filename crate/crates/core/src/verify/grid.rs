use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 10_000;
/// Distance from 0 and from 1 of the outermost default grid points.
pub const DEFAULT_END_OFFSET: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Uniform,
    /// Geometric accumulation towards both ends of `(0, 1)`.
    EndpointRefined,
}

/// Sample points in `[x_min, x_max] ⊂ (0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub count: usize,
    pub spacing: Spacing,
    pub x_min: f64,
    pub x_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            count: DEFAULT_GRID_POINTS,
            spacing: Spacing::EndpointRefined,
            x_min: DEFAULT_END_OFFSET,
            x_max: 1.0 - DEFAULT_END_OFFSET,
        }
    }
}

impl GridSpec {
    pub fn new(count: usize, spacing: Spacing, x_min: f64, x_max: f64) -> Result<Self> {
        let spec = Self {
            count,
            spacing,
            x_min,
            x_max,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn refined(count: usize) -> Self {
        Self {
            count,
            ..Self::default()
        }
    }

    pub fn uniform(count: usize) -> Self {
        Self {
            count,
            spacing: Spacing::Uniform,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::InvalidParameter {
            name: "grid".into(),
            reason,
        };
        if self.count < 2 {
            return Err(bad(format!("need at least 2 points, got {}", self.count)));
        }
        if !(self.x_min > 0.0 && self.x_max < 1.0 && self.x_min < self.x_max) {
            return Err(bad(format!(
                "need 0 < x_min < x_max < 1, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }

    /// Sorted, deduplicated sample points.
    ///
    /// The refined layout puts half the points on a geometric scale in `x`
    /// from `x_min` to the midpoint and half on a geometric scale in `1 - x`
    /// from `1 - x_max` to the midpoint, so both ends are resolved down to
    /// their offsets.
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        let mut pts = match self.spacing {
            Spacing::Uniform => {
                let step = (self.x_max - self.x_min) / (n - 1) as f64;
                (0..n)
                    .map(|i| {
                        if i + 1 == n {
                            self.x_max
                        } else {
                            self.x_min + step * i as f64
                        }
                    })
                    .collect::<Vec<_>>()
            }
            Spacing::EndpointRefined => {
                let mid = 0.5 * (self.x_min + self.x_max);
                let n_left = n / 2;
                let n_right = n - n_left;
                // the left run stops one step short of the shared midpoint
                let mut pts = geometric(self.x_min, mid, n_left + 1);
                pts.pop();
                pts.extend(
                    geometric(1.0 - self.x_max, 1.0 - mid, n_right)
                        .into_iter()
                        .map(|e| 1.0 - e),
                );
                pts
            }
        };
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// `n` points from `start` to `end` (both positive) with constant ratio.
fn geometric(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let log_ratio = (end / start).ln() / (n - 1) as f64;
            (0..n)
                .map(|i| {
                    if i + 1 == n {
                        end
                    } else {
                        start * (log_ratio * i as f64).exp()
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_reaches_both_ends() {
        let pts = GridSpec::default().points();
        assert_eq!(pts.len(), DEFAULT_GRID_POINTS);
        assert_eq!(pts[0], 1e-9);
        assert_eq!(pts[pts.len() - 1], 1.0 - 1e-9);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        // both ends are densely sampled on a log scale
        assert!(pts.iter().filter(|&&x| x < 1e-6).count() > 1000);
        assert!(pts.iter().filter(|&&x| 1.0 - x < 1e-6).count() > 1000);
    }

    #[test]
    fn uniform_grid_is_evenly_spaced() {
        let g = GridSpec::new(11, Spacing::Uniform, 0.1, 0.9).unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0], 0.1);
        assert_eq!(pts[10], 0.9);
        assert!((pts[5] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::new(1, Spacing::Uniform, 0.1, 0.9).is_err());
        assert!(GridSpec::new(10, Spacing::Uniform, 0.0, 0.9).is_err());
        assert!(GridSpec::new(10, Spacing::Uniform, 0.5, 0.4).is_err());
        assert!(GridSpec::new(10, Spacing::EndpointRefined, 0.1, 1.0).is_err());
    }
}
