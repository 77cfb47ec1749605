//! Uniform radial grids and their quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Condition imposed at the outer radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Whole-space trap problem truncated at `r_out`: `Φ(r_out) = 0`.
    Decay,
    /// Ball of radius `r_out` with zero normal derivative of `Φ`.
    Neumann,
}

/// Nodes `r_k = k h`, `k = 0..=intervals`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub spacing: f64,
    pub intervals: usize,
    pub boundary: Boundary,
}

pub const MIN_PRODUCTION_NODES: usize = 200;

impl RadialGrid {
    pub fn new(r_out: f64, spacing: f64, boundary: Boundary) -> Result<Self> {
        if !(spacing > 0.0 && r_out > 0.0 && spacing.is_finite() && r_out.is_finite()) {
            return Err(Error::invalid(
                "grid spacing and outer radius must be positive",
            ));
        }
        let intervals = (r_out / spacing).round() as usize;
        if intervals < 4 {
            return Err(Error::invalid("grid needs at least four intervals"));
        }
        Ok(Self {
            spacing: r_out / intervals as f64,
            intervals,
            boundary,
        })
    }

    pub fn r_out(&self) -> f64 {
        self.spacing * self.intervals as f64
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn radius(&self, k: usize) -> f64 {
        k as f64 * self.spacing
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.radius(k))
    }

    /// Trapezoid weights on `[0, r_out]`. Integrands here are even in `r`
    /// after the `r²` Jacobian, so the rule is spectrally accurate at the
    /// origin; only the Neumann edge contributes an `O(h²)` end error.
    pub fn weight(&self, k: usize) -> f64 {
        if k == 0 || k == self.intervals {
            0.5 * self.spacing
        } else {
            self.spacing
        }
    }

    /// `4π ∫ g(r) r² dr` for node samples `g`.
    pub fn integrate_r2(&self, g: &[f64]) -> f64 {
        debug_assert_eq!(g.len(), self.len());
        let s: f64 = g
            .iter()
            .enumerate()
            .map(|(k, v)| self.weight(k) * v * self.radius(k).powi(2))
            .sum();
        4.0 * std::f64::consts::PI * s
    }

    /// Composite Simpson version of [`Self::integrate_r2`]; needs an even
    /// number of intervals. Used as an independent quadrature check.
    pub fn simpson_r2(&self, g: &[f64]) -> Option<f64> {
        if self.intervals % 2 != 0 {
            return None;
        }
        let h = self.spacing;
        let s: f64 = g
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let c = if k == 0 || k == self.intervals {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * v * self.radius(k).powi(2)
            })
            .sum();
        Some(4.0 * std::f64::consts::PI * s * h / 3.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn snaps_spacing_to_outer_radius() {
        let g = RadialGrid::new(10.0, 0.03, Boundary::Decay).unwrap();
        assert_eq!(g.intervals, 333);
        assert!((g.r_out() - 10.0).abs() < 1e-12);
        assert!(RadialGrid::new(1.0, 0.5, Boundary::Decay).is_err());
    }

    #[test]
    fn gaussian_moment_is_exact_to_rounding() {
        let g = RadialGrid::new(10.0, 0.05, Boundary::Decay).unwrap();
        let rho: Vec<f64> = g.radii().map(|r| (-r * r).exp()).collect();
        let exact = PI.powf(1.5);
        assert!((g.integrate_r2(&rho) - exact).abs() < 1e-13);
        assert!((g.simpson_r2(&rho).unwrap() - exact).abs() < 1e-6);
    }
}
