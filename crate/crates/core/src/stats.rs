//! Error bars for correlated Monte Carlo series by repeated blocking.

use serde::{Deserialize, Serialize};

/// Mean with a standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    /// False when the blocking curve never levelled off; the error bar is
    /// then the largest one seen and likely an underestimate.
    pub plateau: bool,
}

impl Estimate {
    /// Difference of two independent estimates.
    pub fn minus(&self, other: &Estimate) -> Estimate {
        Estimate {
            mean: self.mean - other.mean,
            stderr: self.stderr.hypot(other.stderr),
            samples: self.samples.min(other.samples),
            plateau: self.plateau && other.plateau,
        }
    }
}

/// Smallest number of blocks a level must keep to be trusted.
const MIN_BLOCKS: usize = 32;

/// Standard error of the mean at each blocking level, with its own
/// uncertainty `σ/√(2(n−1))`.
pub fn blocking_curve(series: &[f64]) -> Vec<(usize, f64, f64)> {
    let mut level: Vec<f64> = series.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while level.len() >= MIN_BLOCKS {
        let n = level.len() as f64;
        let mean = level.iter().sum::<f64>() / n;
        let var = level.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        out.push((size, se, se / (2.0 * (n - 1.0)).sqrt()));
        level = level.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect();
        size *= 2;
    }
    out
}

/// Blocking estimate: the error bar is taken at the first level from which
/// the next one no longer grows beyond the level's own uncertainty.
pub fn blocking(series: &[f64]) -> Estimate {
    let n = series.len();
    let mean = if n == 0 {
        f64::NAN
    } else {
        series.iter().sum::<f64>() / n as f64
    };
    let curve = blocking_curve(series);
    if curve.is_empty() {
        let var = if n > 1 {
            series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0)
        } else {
            0.0
        };
        return Estimate {
            mean,
            stderr: (var / n.max(1) as f64).sqrt(),
            samples: n,
            plateau: false,
        };
    }
    for w in curve.windows(2) {
        let (_, se, err) = w[0];
        if w[1].1 - se <= err {
            return Estimate {
                mean,
                stderr: se.max(w[1].1),
                samples: n,
                plateau: true,
            };
        }
    }
    Estimate {
        mean,
        stderr: curve.iter().map(|c| c.1).fold(0.0, f64::max),
        samples: n,
        plateau: curve.len() == 1,
    }
}

/// Sample-weighted combination of independent per-walker estimates, in the
/// order given.
pub fn combine(parts: &[Estimate]) -> Estimate {
    let total: usize = parts.iter().map(|p| p.samples).sum();
    let t = total as f64;
    let mean = parts.iter().map(|p| p.samples as f64 * p.mean).sum::<f64>() / t;
    let var = parts
        .iter()
        .map(|p| (p.samples as f64 / t * p.stderr).powi(2))
        .sum::<f64>();
    Estimate {
        mean,
        stderr: var.sqrt(),
        samples: total,
        plateau: parts.iter().all(|p| p.plateau),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn white_noise_error_is_textbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<f64> = (0..1 << 16).map(|_| rng.sample(StandardNormal)).collect();
        let e = blocking(&xs);
        let expect = 1.0 / (xs.len() as f64).sqrt();
        assert!(
            (e.stderr / expect - 1.0).abs() < 0.1,
            "{}",
            e.stderr / expect
        );
        assert!(e.plateau);
    }

    #[test]
    fn correlated_series_gets_inflated_error() {
        // AR(1) with φ = 0.9: true σ_mean ≈ √((1+φ)/(1−φ)) · σ/√n
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let phi: f64 = 0.9;
        let mut x = 0.0;
        let xs: Vec<f64> = (0..1 << 18)
            .map(|_| {
                x = phi * x + rng.sample::<f64, _>(StandardNormal);
                x
            })
            .collect();
        let n = xs.len() as f64;
        let sigma = (1.0 / (1.0 - phi * phi)).sqrt();
        let expect = ((1.0 + phi) / (1.0 - phi)).sqrt() * sigma / n.sqrt();
        let e = blocking(&xs);
        assert!(
            (e.stderr / expect - 1.0).abs() < 0.2,
            "{}",
            e.stderr / expect
        );
    }

    #[test]
    fn constant_series_has_zero_error() {
        let e = blocking(&[3.0; 1000]);
        assert_eq!(e.mean, 3.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn combine_is_weighted() {
        let a = Estimate {
            mean: 1.0,
            stderr: 0.3,
            samples: 100,
            plateau: true,
        };
        let b = Estimate {
            mean: 4.0,
            stderr: 0.4,
            samples: 200,
            plateau: true,
        };
        let c = combine(&[a, b]);
        assert!((c.mean - 3.0).abs() < 1e-15);
        let expect = ((0.3f64 / 3.0).powi(2) + (0.8f64 / 3.0).powi(2)).sqrt();
        assert!((c.stderr - expect).abs() < 1e-15);
        let d = b.minus(&a);
        assert_eq!(d.mean, 3.0);
        assert!((d.stderr - 0.5).abs() < 1e-15);
    }
}
