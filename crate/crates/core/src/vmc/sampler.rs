//! Metropolis sampling of `|Ψ|²` with single-particle moves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::trial::{local_energy, PairCache, Point, TrialWavefunction};
use crate::error::{Error, Result};
use crate::potential::{PairPotential, TrapPotential};
use crate::stats::{blocking, combine, Estimate};

/// Run parameters; together with the trial they determine the output
/// bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VmcConfig {
    pub walkers: usize,
    /// Tuning sweeps per walker (discarded).
    pub burn_in: usize,
    /// Recorded sweeps per walker; one sample per sweep of `N` moves.
    pub sweeps: usize,
    pub seed: u64,
    /// Initial Gaussian move width.
    pub step: f64,
    /// Finite-difference step for derivatives of the pair product `F`.
    pub fd_step: f64,
    pub histogram_radius: f64,
    pub histogram_bins: usize,
    /// Histogram batches per walker, for per-bin error bars.
    pub batches: usize,
}

impl Default for VmcConfig {
    fn default() -> Self {
        Self {
            walkers: 4,
            burn_in: 2_000,
            sweeps: 25_000,
            seed: 1,
            step: 0.8,
            fd_step: 1e-3,
            histogram_radius: 4.0,
            histogram_bins: 40,
            batches: 20,
        }
    }
}

impl VmcConfig {
    pub fn samples(&self) -> usize {
        self.walkers * self.sweeps
    }

    pub fn validate(&self) -> Result<()> {
        if self.walkers == 0 || self.sweeps == 0 {
            return Err(Error::invalid(
                "VMC needs at least one walker and one sweep",
            ));
        }
        if !(self.step > 0.0 && self.fd_step > 0.0 && self.histogram_radius > 0.0) {
            return Err(Error::invalid(
                "VMC step sizes and histogram radius must be positive",
            ));
        }
        if self.histogram_bins == 0 || self.batches == 0 || self.batches > self.sweeps {
            return Err(Error::invalid(
                "histogram needs bins ≥ 1 and 1 ≤ batches ≤ sweeps",
            ));
        }
        Ok(())
    }
}

/// Energy estimate with the sampling diagnostics that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub acceptance: f64,
    pub seed: u64,
    pub walkers: usize,
    pub plateau: bool,
}

impl EnergyEstimate {
    pub fn as_estimate(&self) -> Estimate {
        Estimate {
            mean: self.mean,
            stderr: self.stderr,
            samples: self.samples,
            plateau: self.plateau,
        }
    }
}

/// Shell histogram of particle positions, one count vector per batch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialHistogram {
    pub radius: f64,
    pub bins: usize,
    pub particles: usize,
    /// Per-batch counts; each batch holds `sweeps_per_batch` configurations.
    pub batches: Vec<Vec<u64>>,
    pub sweeps_per_batch: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VmcRun {
    pub particles: usize,
    pub config: VmcConfig,
    pub energy: EnergyEstimate,
    /// Mean of the quadratic-form integrand.
    pub quadratic_form: Estimate,
    /// `⟨Σ|x_i|²⟩/N`.
    pub r2: Estimate,
    pub histogram: RadialHistogram,
    pub final_steps: Vec<f64>,
    pub walker_acceptance: Vec<f64>,
    pub one_sided: usize,
    /// Smallest pair distance over all recorded configurations.
    pub min_pair_distance: f64,
}

struct WalkerOutput {
    energy: Vec<f64>,
    quadratic: Vec<f64>,
    r2: Vec<f64>,
    batches: Vec<Vec<u64>>,
    batch_sweeps: Vec<usize>,
    accepted: u64,
    proposed: u64,
    step: f64,
    one_sided: usize,
    min_pair: f64,
}

fn initial_positions(trial: &TrialWavefunction, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let width = match &trial.one_body {
        super::trial::OneBody::Gaussian { omega, .. } => (0.5 / omega).sqrt(),
        super::trial::OneBody::Spline(_) => 0.7,
    };
    let core = trial.core().unwrap_or(0.0);
    let mut positions: Vec<Point> = Vec::with_capacity(trial.particles);
    for _ in 0..trial.particles {
        let mut x = [0.0; 3];
        for _attempt in 0..1000 {
            for c in &mut x {
                *c = width * rng.sample::<f64, _>(StandardNormal);
            }
            let clear = positions.iter().all(|y| {
                let d2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2);
                d2 > (1.01 * core).powi(2)
            });
            if clear {
                break;
            }
        }
        positions.push(x);
    }
    positions
}

fn radius(x: &Point) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

fn run_walker(
    trial: &TrialWavefunction,
    v: &PairPotential,
    trap: &TrapPotential,
    cfg: &VmcConfig,
    walker: usize,
) -> WalkerOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(walker as u64);
    let n = trial.particles;
    let mut cache = PairCache::new(trial, initial_positions(trial, &mut rng));
    let mut log_phi: Vec<f64> = cache
        .positions
        .iter()
        .map(|x| trial.one_body.log(radius(x)))
        .collect();
    let mut step = cfg.step;

    let sweep = |cache: &mut PairCache, log_phi: &mut Vec<f64>, step: f64, rng: &mut ChaCha8Rng| {
        let mut accepted = 0u64;
        for i in 0..n {
            let old = cache.positions[i];
            let mut x = old;
            for c in &mut x {
                *c += step * rng.sample::<f64, _>(StandardNormal);
            }
            let new_phi = trial.one_body.log(radius(&x));
            let d_pair = cache.delta_ln_f(trial, i, &x);
            let d_log = new_phi - log_phi[i] + d_pair;
            let u: f64 = rng.random();
            if d_pair.is_finite() && u.ln() < 2.0 * d_log {
                cache.apply(trial, i, x);
                log_phi[i] = new_phi;
                accepted += 1;
            }
        }
        accepted
    };

    // Burn-in: retune the move width every 50 sweeps towards 50% acceptance.
    let window = 50;
    let mut acc_window = 0;
    for s in 0..cfg.burn_in {
        acc_window += sweep(&mut cache, &mut log_phi, step, &mut rng);
        if (s + 1) % window == 0 {
            let rate = acc_window as f64 / (window * n) as f64;
            step *= (rate / 0.5).clamp(0.5, 2.0);
            acc_window = 0;
        }
    }

    let per_batch = cfg.sweeps / cfg.batches;
    let mut out = WalkerOutput {
        energy: Vec::with_capacity(cfg.sweeps),
        quadratic: Vec::with_capacity(cfg.sweeps),
        r2: Vec::with_capacity(cfg.sweeps),
        batches: vec![vec![0; cfg.histogram_bins]; cfg.batches],
        batch_sweeps: vec![0; cfg.batches],
        accepted: 0,
        proposed: 0,
        step,
        one_sided: 0,
        min_pair: f64::INFINITY,
    };
    let bin_width = cfg.histogram_radius / cfg.histogram_bins as f64;
    for s in 0..cfg.sweeps {
        out.accepted += sweep(&mut cache, &mut log_phi, step, &mut rng);
        out.proposed += n as u64;
        let sample = local_energy(trial, &cache, v, trap, cfg.fd_step);
        out.energy.push(sample.energy);
        out.quadratic.push(sample.quadratic_form);
        out.one_sided += sample.one_sided;
        out.min_pair = cache
            .distances()
            .iter()
            .fold(out.min_pair, |m, &t| m.min(t));
        let batch = (s / per_batch).min(cfg.batches - 1);
        out.batch_sweeps[batch] += 1;
        let mut r2 = 0.0;
        for x in &cache.positions {
            let r = radius(x);
            r2 += r * r;
            let bin = (r / bin_width) as usize;
            if bin < cfg.histogram_bins {
                out.batches[batch][bin] += 1;
            }
        }
        out.r2.push(r2 / n as f64);
    }
    out
}

/// Samples `|Ψ|²` with `cfg.walkers` independent chains. Walker `w` uses the
/// ChaCha8 stream `w` of `cfg.seed`; results are merged in walker order, so
/// the output does not depend on thread scheduling.
pub fn metropolis_run(
    trial: &TrialWavefunction,
    v: &PairPotential,
    trap: &TrapPotential,
    cfg: &VmcConfig,
) -> Result<VmcRun> {
    cfg.validate()?;
    let outputs: Vec<WalkerOutput> = (0..cfg.walkers)
        .into_par_iter()
        .map(|w| run_walker(trial, v, trap, cfg, w))
        .collect();

    let walker_acceptance: Vec<f64> = outputs
        .iter()
        .map(|o| o.accepted as f64 / o.proposed as f64)
        .collect();
    if walker_acceptance.iter().all(|a| *a == 0.0) {
        return Err(Error::WalkersStuck(cfg.walkers));
    }
    let accepted: u64 = outputs.iter().map(|o| o.accepted).sum();
    let proposed: u64 = outputs.iter().map(|o| o.proposed).sum();
    let acceptance = accepted as f64 / proposed as f64;
    if !(0.2..=0.8).contains(&acceptance) {
        log::warn!("VMC acceptance {acceptance:.3} is outside [0.2, 0.8] after tuning");
    }
    let energy = combine(
        &outputs
            .iter()
            .map(|o| blocking(&o.energy))
            .collect::<Vec<_>>(),
    );
    let quadratic_form = combine(
        &outputs
            .iter()
            .map(|o| blocking(&o.quadratic))
            .collect::<Vec<_>>(),
    );
    let r2 = combine(&outputs.iter().map(|o| blocking(&o.r2)).collect::<Vec<_>>());
    if !energy.plateau {
        log::warn!("blocking analysis did not reach a plateau; error bars may be low");
    }
    let one_sided = outputs.iter().map(|o| o.one_sided).sum();
    let final_steps = outputs.iter().map(|o| o.step).collect();
    let min_pair_distance = outputs
        .iter()
        .map(|o| o.min_pair)
        .fold(f64::INFINITY, f64::min);
    let mut batches = Vec::new();
    let mut sweeps_per_batch = Vec::new();
    for o in outputs {
        batches.extend(o.batches);
        sweeps_per_batch.extend(o.batch_sweeps);
    }
    Ok(VmcRun {
        particles: trial.particles,
        config: cfg.clone(),
        energy: EnergyEstimate {
            mean: energy.mean,
            stderr: energy.stderr,
            samples: energy.samples,
            acceptance,
            seed: cfg.seed,
            walkers: cfg.walkers,
            plateau: energy.plateau,
        },
        quadratic_form,
        r2,
        histogram: RadialHistogram {
            radius: cfg.histogram_radius,
            bins: cfg.histogram_bins,
            particles: trial.particles,
            batches,
            sweeps_per_batch,
        },
        final_steps,
        walker_acceptance,
        one_sided,
        min_pair_distance,
    })
}
