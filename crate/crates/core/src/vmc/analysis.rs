//! Post-processing of VMC runs against GP quantities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::sampler::{EnergyEstimate, RadialHistogram, VmcRun};
use crate::gp::GpResult;
use crate::stats::Estimate;

/// Trend checks compare neighbouring sweep points at this many combined
/// standard errors.
pub const TREND_SIGMAS: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundReport {
    pub particles: f64,
    pub scattering_length: f64,
    pub gp_energy: f64,
    /// `E_VMC / E_GP`.
    pub ratio: f64,
    pub ratio_stderr: f64,
    /// `Ȳ^{1/3}`.
    pub y_bar_cbrt: f64,
    /// `(ratio − 1)/Ȳ^{1/3}`.
    pub implied_constant: f64,
    pub implied_constant_stderr: f64,
}

pub fn upper_bound_check(est: &EnergyEstimate, gp: &GpResult) -> UpperBoundReport {
    let e = gp.energy();
    let ratio = est.mean / e;
    let ratio_stderr = est.stderr / e.abs();
    let y = gp.gas_parameter().cbrt();
    let (implied_constant, implied_constant_stderr) = if y > 0.0 {
        ((ratio - 1.0) / y, ratio_stderr / y)
    } else {
        (0.0, 0.0)
    };
    UpperBoundReport {
        particles: gp.particles(),
        scattering_length: gp.scattering_length(),
        gp_energy: e,
        ratio,
        ratio_stderr,
        y_bar_cbrt: y,
        implied_constant,
        implied_constant_stderr,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    /// `ratio − 1 ≥ −3σ` at every point.
    pub nonnegative: Vec<bool>,
    /// `|ratio − 1|` never grows by more than [`TREND_SIGMAS`] combined σ.
    pub nonincreasing: bool,
    pub max_abs_implied_constant: f64,
    /// Whether every `|implied constant|` stays within `1.5 ×` the given
    /// baseline maximum.
    pub within_baseline: Option<bool>,
}

/// Trend of an `N`-sweep at fixed `Na`, in increasing `N`.
pub fn sweep_trend(
    reports: &[UpperBoundReport],
    baseline_max_constant: Option<f64>,
) -> TrendReport {
    let nonnegative = reports
        .iter()
        .map(|r| r.ratio - 1.0 >= -3.0 * r.ratio_stderr)
        .collect();
    let nonincreasing = reports.windows(2).all(|w| {
        let sigma = w[0].ratio_stderr.hypot(w[1].ratio_stderr);
        (w[1].ratio - 1.0).abs() <= (w[0].ratio - 1.0).abs() + TREND_SIGMAS * sigma
    });
    let max_abs_implied_constant = reports
        .iter()
        .map(|r| r.implied_constant.abs())
        .fold(0.0, f64::max);
    let within_baseline = baseline_max_constant.map(|b| {
        reports
            .iter()
            .all(|r| r.implied_constant.abs() - 3.0 * r.implied_constant_stderr <= 1.5 * b)
    });
    TrendReport {
        nonnegative,
        nonincreasing,
        max_abs_implied_constant,
        within_baseline,
    }
}

/// Radial density per particle, `ρ_VMC(r)/N`, averaged over shells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Total recorded configurations.
    pub configurations: usize,
    pub particles: usize,
}

/// Shell-binned `ρ/N` with batch-mean error bars; empty bins stay in the
/// profile with zero density.
pub fn density_histogram(h: &RadialHistogram) -> DensityProfile {
    let width = h.radius / h.bins as f64;
    let edges: Vec<f64> = (0..=h.bins).map(|k| k as f64 * width).collect();
    let volumes: Vec<f64> = edges
        .windows(2)
        .map(|e| 4.0 * PI * (e[1].powi(3) - e[0].powi(3)) / 3.0)
        .collect();
    let n = h.particles as f64;
    let per_batch: Vec<Vec<f64>> = h
        .batches
        .iter()
        .zip(&h.sweeps_per_batch)
        .filter(|(_, s)| **s > 0)
        .map(|(counts, &s)| {
            counts
                .iter()
                .zip(&volumes)
                .map(|(&c, v)| c as f64 / (s as f64 * v * n))
                .collect()
        })
        .collect();
    let weights: Vec<f64> = h
        .sweeps_per_batch
        .iter()
        .filter(|s| **s > 0)
        .map(|&s| s as f64)
        .collect();
    let total: f64 = weights.iter().sum();
    let b = per_batch.len() as f64;
    let mut density = vec![0.0; h.bins];
    let mut stderr = vec![0.0; h.bins];
    for bin in 0..h.bins {
        let mean = per_batch
            .iter()
            .zip(&weights)
            .map(|(d, w)| d[bin] * w)
            .sum::<f64>()
            / total;
        let var = per_batch
            .iter()
            .map(|d| (d[bin] - mean).powi(2))
            .sum::<f64>()
            / (b - 1.0).max(1.0);
        density[bin] = mean;
        stderr[bin] = (var / b).sqrt();
    }
    DensityProfile {
        edges,
        density,
        stderr,
        configurations: total as usize,
        particles: h.particles,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityComparison {
    /// Shell average of the reference `ρ/N`.
    pub reference: Vec<f64>,
    /// `(ρ_VMC − ρ_ref)/σ` per bin; signed infinity where `σ = 0` and they
    /// differ, 0 where both vanish.
    pub z: Vec<f64>,
    /// Bins with at least five expected counts enter the χ².
    pub chi2_per_dof: f64,
    pub max_abs_z: f64,
    /// `4π Σ |ρ_VMC − ρ_ref| r² Δr` (per particle).
    pub l1_discrepancy: f64,
}

fn shell_average(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    // Simpson on r² f(r) over the shell
    let m = 64;
    let h = (hi - lo) / m as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..=m {
        let r = lo + k as f64 * h;
        let w = if k == 0 || k == m {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        num += w * f(r) * r * r;
        den += w * r * r;
    }
    num / den
}

/// Compares a profile with a reference per-particle density.
pub fn compare_density(
    profile: &DensityProfile,
    reference: impl Fn(f64) -> f64,
) -> DensityComparison {
    let mut refs = Vec::new();
    let mut z = Vec::new();
    let mut chi2 = 0.0;
    let mut dof = 0usize;
    let mut l1 = 0.0;
    let samples = (profile.configurations * profile.particles) as f64;
    for (bin, e) in profile.edges.windows(2).enumerate() {
        let r = shell_average(&reference, e[0], e[1]);
        let volume = 4.0 * PI * (e[1].powi(3) - e[0].powi(3)) / 3.0;
        let diff = profile.density[bin] - r;
        let s = profile.stderr[bin];
        let zi = if s > 0.0 {
            diff / s
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        };
        if r * volume * samples >= 5.0 && s > 0.0 {
            chi2 += zi * zi;
            dof += 1;
        }
        l1 += diff.abs() * volume;
        refs.push(r);
        z.push(zi);
    }
    let max_abs_z = z
        .iter()
        .zip(&refs)
        .zip(profile.edges.windows(2))
        .filter(|((_, r), e)| **r * 4.0 * PI * (e[1].powi(3) - e[0].powi(3)) / 3.0 * samples >= 5.0)
        .map(|((z, _), _)| z.abs())
        .fold(0.0, f64::max);
    DensityComparison {
        reference: refs,
        z,
        chi2_per_dof: chi2 / dof.max(1) as f64,
        max_abs_z,
        l1_discrepancy: l1,
    }
}

/// `⟨r²⟩` of `|Φ_GP|²/N` by the grid quadrature.
pub fn gp_r2(gp: &GpResult) -> f64 {
    let grid = &gp.orbital.grid;
    let moments: Vec<f64> = grid
        .radii()
        .zip(&gp.orbital.values)
        .map(|(r, v)| v * v * r * r)
        .collect();
    grid.integrate_r2(&moments) / gp.particles()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    /// `E_VMC − E_GP`.
    pub lhs: Estimate,
    /// `4πaρ̄N + Q̂`, `Q̂` from an independent chain.
    pub rhs: Estimate,
    pub leading: f64,
    pub quadratic_form: Estimate,
    /// `|lhs − rhs|` in combined standard errors.
    pub sigmas: f64,
    pub consistent: bool,
}

/// Relative accuracy of grid GP energies.
pub const GP_GRID_TOLERANCE: f64 = 1e-6;

/// Seed offset of the independent chain used for `Q̂`.
pub const DECOMPOSITION_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

/// Checks `⟨H⟩_Ψ − E_GP = 4πaρ̄N + Q(F)` from an energy run and an
/// independent run of the same trial.
pub fn decomposition_from_runs(
    energy_run: &VmcRun,
    q_run: &VmcRun,
    gp: &GpResult,
) -> DecompositionReport {
    let e = energy_run.energy.as_estimate();
    let lhs = Estimate {
        mean: e.mean - gp.energy(),
        ..e
    };
    let leading = 4.0 * PI * gp.scattering_length() * gp.mean_density * gp.particles();
    let q = q_run.quadratic_form;
    let rhs = Estimate {
        mean: leading + q.mean,
        ..q
    };
    // the GP energy enters with its grid accuracy as a further error term
    let combined = lhs
        .stderr
        .hypot(rhs.stderr)
        .hypot(GP_GRID_TOLERANCE * gp.energy().abs());
    let gap = (lhs.mean - rhs.mean).abs();
    let sigmas = gap / combined;
    DecompositionReport {
        lhs,
        rhs,
        leading,
        quadratic_form: q,
        sigmas,
        consistent: sigmas <= 5.0,
    }
}

/// `Q(1) = −8πa ∫ρ_GP² = −8πaρ̄N`: the quadratic form without pair factor,
/// by quadrature.
pub fn quadratic_form_without_pair(gp: &GpResult) -> f64 {
    let density: Vec<f64> = gp.orbital.values.iter().map(|v| v.powi(4)).collect();
    -8.0 * PI * gp.scattering_length() * gp.orbital.grid.integrate_r2(&density)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChemicalPotentialEstimate {
    pub difference: f64,
    pub stderr: f64,
    pub lambda: f64,
    pub ratio: f64,
    /// Error bar larger than the difference itself.
    pub inconclusive: bool,
}

/// `E_VMC(N+1) − E_VMC(N)` against the GP eigenvalue. The `N + 1` run uses
/// the trial built for `N + 1` particles rather than the true `N`-body
/// ground state times one pair factor, so this is a trend estimate only.
pub fn chemical_potential_estimate(
    at_n: &EnergyEstimate,
    at_n1: &EnergyEstimate,
    lambda: f64,
) -> ChemicalPotentialEstimate {
    let difference = at_n1.mean - at_n.mean;
    let stderr = at_n.stderr.hypot(at_n1.stderr);
    ChemicalPotentialEstimate {
        difference,
        stderr,
        lambda,
        ratio: difference / lambda,
        inconclusive: stderr > difference.abs(),
    }
}
