//! Variational Monte Carlo with the nearest-neighbour trial state
//! `Ψ = Π Φ_GP(x_i) · Π f(t_i)`.
//!
//! The trial is not symmetric under particle exchange, which is fine for an
//! upper bound: the bosonic ground-state energy equals the absolute one.

mod analysis;
mod sampler;
mod trial;

pub use analysis::{
    chemical_potential_estimate, compare_density, decomposition_from_runs, density_histogram,
    gp_r2, quadratic_form_without_pair, sweep_trend, upper_bound_check, ChemicalPotentialEstimate,
    DecompositionReport, DensityComparison, DensityProfile, TrendReport, UpperBoundReport,
    DECOMPOSITION_SEED_OFFSET, GP_GRID_TOLERANCE, TREND_SIGMAS,
};
pub use sampler::{metropolis_run, EnergyEstimate, RadialHistogram, VmcConfig, VmcRun};
pub use trial::{
    local_energy, log_trial, nearest_neighbor_distances, LocalSample, OneBody, PairCache, Point,
    TrialWavefunction,
};

use crate::error::{Error, Result};
use crate::gp::GpResult;
use crate::potential::{PairPotential, TrapPotential};
use crate::scattering::{build_pair_factor, scatter};

/// Trial state for a GP minimizer and pair potential: the pair factor uses
/// the cutoff of the GP mean density and is omitted when `a = 0`.
pub fn build_trial(gp: &GpResult, v: &PairPotential) -> Result<TrialWavefunction> {
    if gp.scattering_length() == 0.0 {
        return TrialWavefunction::from_gp(gp, None);
    }
    let (sol, a) = scatter(v)?;
    let tolerance = 1e-6 * a.value.max(gp.scattering_length()) + a.error;
    if (a.value - gp.scattering_length()).abs() > tolerance {
        return Err(Error::invalid(format!(
            "pair potential has a = {} but the GP solution was computed with a = {}",
            a.value,
            gp.scattering_length()
        )));
    }
    let pair = build_pair_factor(&sol, gp.mean_density)?;
    TrialWavefunction::from_gp(gp, Some(pair))
}

/// Runs the energy chain and an independent chain for `Q̂`, and compares
/// both sides of `⟨H⟩ − E_GP = 4πaρ̄N + Q(F)`.
pub fn energy_decomposition_check(
    trial: &TrialWavefunction,
    gp: &GpResult,
    v: &PairPotential,
    trap: &TrapPotential,
    cfg: &VmcConfig,
) -> Result<(DecompositionReport, VmcRun, VmcRun)> {
    let energy_run = metropolis_run(trial, v, trap, cfg)?;
    let q_cfg = VmcConfig {
        seed: cfg.seed.wrapping_add(DECOMPOSITION_SEED_OFFSET),
        ..cfg.clone()
    };
    let q_run = metropolis_run(trial, v, trap, &q_cfg)?;
    Ok((
        decomposition_from_runs(&energy_run, &q_run, gp),
        energy_run,
        q_run,
    ))
}
