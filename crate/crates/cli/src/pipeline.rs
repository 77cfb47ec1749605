//! The pipelines behind each subcommand. Every pipeline writes its
//! artifacts as it goes, so a failure part-way keeps what was finished.

use serde::{Deserialize, Serialize};

use dilute_bose::boxmethod::{assemble_lower_bound, convergence_study, optimal_side, EnergyModel};
use dilute_bose::boxmethod::{ConvergenceStudy, LowerBoundReport};
use dilute_bose::gp::{
    chemical_potential, minimize, solve_in_box, ChemicalPotentialReport, GpSummary,
};
use dilute_bose::homog::{sweep, BoundConstants, SweepRow};
use dilute_bose::scattering::{scattering_length, solve_zero_energy, ScatteringLength};
use dilute_bose::stats::Estimate;
use dilute_bose::vmc::{
    build_trial, compare_density, density_histogram, energy_decomposition_check, gp_r2,
    metropolis_run, sweep_trend, upper_bound_check, DecompositionReport, DensityComparison,
    DensityProfile, EnergyEstimate, TrendReport, UpperBoundReport, VmcRun, TREND_SIGMAS,
};
use dilute_bose::{Error, GpResult, PairPotential, Result, TrapPotential};

use crate::config::{BoxesConfig, GpConfig, HomogConfig, ScatterConfig, SweepConfig, VmcRunConfig};
use crate::output::OutputDir;

pub const RESULTS: &str = "results.json";

/// Profiles are written at most this many rows long.
const PROFILE_ROWS: usize = 2000;

fn stride(len: usize) -> usize {
    len.div_ceil(PROFILE_ROWS).max(1)
}

fn require_converged(gp: &GpResult, what: &str) -> Result<()> {
    if gp.converged {
        Ok(())
    } else {
        Err(Error::NonConvergence(format!(
            "{what}: GP residual {:e} above tolerance {:e} after {} iterations",
            gp.residual, gp.problem.tolerance, gp.iterations
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterResults {
    pub potential: PairPotential,
    pub scattering_length: ScatteringLength,
    pub r_max: f64,
    pub step: f64,
    pub step_error: f64,
}

#[derive(Serialize)]
struct ProfileRow {
    r: f64,
    u: f64,
    du: f64,
    /// Running estimate `r − u/u'`.
    length: f64,
}

pub fn scatter(cfg: &ScatterConfig, out: &mut OutputDir) -> Result<ScatterResults> {
    let sol = solve_zero_energy(&cfg.potential, cfg.r_max, cfg.step)?;
    let rows: Vec<ProfileRow> = (0..sol.radii.len())
        .step_by(stride(sol.radii.len()))
        .map(|k| ProfileRow {
            r: sol.radii[k],
            u: sol.u[k],
            du: sol.du[k],
            length: if sol.du[k] != 0.0 {
                sol.radii[k] - sol.u[k] / sol.du[k]
            } else {
                f64::NAN
            },
        })
        .collect();
    out.csv("profile.csv", &rows)?;
    let a = scattering_length(&sol)?;
    let results = ScatterResults {
        potential: cfg.potential.clone(),
        scattering_length: a,
        r_max: cfg.r_max,
        step: cfg.step,
        step_error: sol.step_error,
    };
    out.json(RESULTS, &results)?;
    Ok(results)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpResults {
    pub gp: GpSummary,
    pub chemical_potential: ChemicalPotentialReport,
    /// `⟨r²⟩` of `|Φ|²/N`.
    pub r2: f64,
}

#[derive(Serialize)]
struct DensityRow {
    r: f64,
    phi: f64,
    density: f64,
}

fn density_rows(gp: &GpResult) -> Vec<DensityRow> {
    let values = &gp.orbital.values;
    (0..values.len())
        .step_by(stride(values.len()))
        .map(|k| DensityRow {
            r: gp.orbital.grid.radius(k),
            phi: values[k],
            density: values[k] * values[k],
        })
        .collect()
}

pub fn gp(cfg: &GpConfig, out: &mut OutputDir) -> Result<GpResults> {
    let result = match cfg.ball_radius {
        Some(radius) => solve_in_box(
            &cfg.trap,
            radius,
            cfg.particles,
            cfg.scattering_length,
            &cfg.options,
        )?,
        None => minimize(
            &cfg.trap,
            cfg.particles,
            cfg.scattering_length,
            &cfg.options,
        )?,
    };
    out.csv("density.csv", &density_rows(&result))?;
    let results = GpResults {
        gp: result.summary(),
        chemical_potential: chemical_potential(&result, cfg.delta_n)?,
        r2: gp_r2(&result),
    };
    out.json(RESULTS, &results)?;
    require_converged(&result, "gp")?;
    Ok(results)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogResults {
    pub constants: BoundConstants,
    pub constants_note: String,
    pub rows: Vec<SweepRow>,
}

pub fn homog(cfg: &HomogConfig, out: &mut OutputDir) -> Result<HomogResults> {
    cfg.constants.validate()?;
    let rows = sweep(cfg.y_min, cfg.y_max, cfg.points, &cfg.constants)?;
    out.csv("sweep.csv", &rows)?;
    let results = HomogResults {
        constants: cfg.constants,
        constants_note: BoundConstants::DEFAULT_LABEL.into(),
        rows,
    };
    out.json(RESULTS, &results)?;
    Ok(results)
}

/// Scalar part of a [`VmcRun`]; the raw histogram goes to CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub particles: usize,
    pub energy: EnergyEstimate,
    pub quadratic_form: Estimate,
    pub r2: Estimate,
    pub final_steps: Vec<f64>,
    pub walker_acceptance: Vec<f64>,
    /// Local energies that fell back to one-sided differences.
    pub one_sided: usize,
    pub min_pair_distance: f64,
}

impl From<&VmcRun> for RunSummary {
    fn from(r: &VmcRun) -> Self {
        Self {
            particles: r.particles,
            energy: r.energy.clone(),
            quadratic_form: r.quadratic_form,
            r2: r.r2,
            final_steps: r.final_steps.clone(),
            walker_acceptance: r.walker_acceptance.clone(),
            one_sided: r.one_sided,
            min_pair_distance: r.min_pair_distance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VmcResults {
    pub pair: PairPotential,
    pub gp: GpSummary,
    pub run: RunSummary,
    pub upper_bound: UpperBoundReport,
    /// Histogram against `|Φ_GP|²/N`.
    pub density: DensityComparison,
    pub gp_r2: f64,
    pub decomposition: Option<DecompositionReport>,
}

#[derive(Serialize)]
struct HistogramRow {
    r_lo: f64,
    r_hi: f64,
    density: f64,
    stderr: f64,
    reference: f64,
    z: f64,
}

fn histogram_rows(profile: &DensityProfile, cmp: &DensityComparison) -> Vec<HistogramRow> {
    profile
        .edges
        .windows(2)
        .enumerate()
        .map(|(k, e)| HistogramRow {
            r_lo: e[0],
            r_hi: e[1],
            density: profile.density[k],
            stderr: profile.stderr[k],
            reference: cmp.reference[k],
            z: cmp.z[k],
        })
        .collect()
}

/// GP solve, trial state and Metropolis run for one `(N, a)`.
fn sample(
    particles: usize,
    a: f64,
    pair: &PairPotential,
    opts: &dilute_bose::GpOptions,
    sampling: &dilute_bose::vmc::VmcConfig,
    decomposition: bool,
) -> Result<(GpResult, VmcRun, Option<DecompositionReport>)> {
    let trap = TrapPotential::harmonic();
    let gp = minimize(&trap, particles as f64, a, opts)?;
    require_converged(&gp, "vmc orbital")?;
    let trial = build_trial(&gp, pair)?;
    if decomposition {
        let (report, run, _) = energy_decomposition_check(&trial, &gp, pair, &trap, sampling)?;
        Ok((gp, run, Some(report)))
    } else {
        let run = metropolis_run(&trial, pair, &trap, sampling)?;
        Ok((gp, run, None))
    }
}

pub fn vmc(cfg: &VmcRunConfig, out: &mut OutputDir) -> Result<VmcResults> {
    let pair = cfg.pair.potential(cfg.scattering_length)?;
    let (gp, run, decomposition) = sample(
        cfg.particles,
        cfg.scattering_length,
        &pair,
        &cfg.gp,
        &cfg.sampling,
        cfg.decomposition,
    )?;
    let profile = density_histogram(&run.histogram);
    let n = gp.particles();
    let density = compare_density(&profile, |r| gp.density_at(r) / n);
    out.csv("histogram.csv", &histogram_rows(&profile, &density))?;
    let results = VmcResults {
        pair,
        gp: gp.summary(),
        run: RunSummary::from(&run),
        upper_bound: upper_bound_check(&run.energy, &gp),
        density,
        gp_r2: gp_r2(&gp),
        decomposition,
    };
    out.json(RESULTS, &results)?;
    Ok(results)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxesResults {
    pub gp_box: GpSummary,
    pub constants_note: String,
    pub optimal_side: f64,
    pub study: ConvergenceStudy,
}

fn box_solve(n: f64, a: f64, radius: f64, opts: &dilute_bose::GpOptions) -> Result<GpResult> {
    let gp_r = solve_in_box(&TrapPotential::harmonic(), radius, n, a, opts)?;
    require_converged(&gp_r, "Neumann box")?;
    Ok(gp_r)
}

pub fn boxes(cfg: &BoxesConfig, out: &mut OutputDir) -> Result<BoxesResults> {
    let gp_r = box_solve(
        cfg.particles,
        cfg.scattering_length,
        cfg.ball_radius,
        &cfg.gp,
    )?;
    let study = convergence_study(
        &gp_r,
        &cfg.constants,
        cfg.model,
        cfg.side_factor,
        cfg.levels,
    )?;
    out.csv(
        "sweep.csv",
        &study.rows.iter().map(BoxRow::from).collect::<Vec<_>>(),
    )?;
    let results = BoxesResults {
        gp_box: gp_r.summary(),
        constants_note: BoundConstants::DEFAULT_LABEL.into(),
        optimal_side: optimal_side(cfg.particles, cfg.side_factor),
        study,
    };
    out.json(RESULTS, &results)?;
    Ok(results)
}

#[derive(Serialize)]
struct BoxRow {
    side: f64,
    cells: usize,
    theorem_cells: usize,
    unconstrained_total: f64,
    constrained_total: f64,
    bound: f64,
    ratio: f64,
    density_variation: f64,
    gas_parameter_proxy: f64,
}

impl From<&LowerBoundReport> for BoxRow {
    fn from(r: &LowerBoundReport) -> Self {
        Self {
            side: r.side,
            cells: r.cells,
            theorem_cells: r.theorem_cells,
            unconstrained_total: r.unconstrained_total,
            constrained_total: r.constrained_total,
            bound: r.bound,
            ratio: r.ratio,
            density_variation: r.density_variation,
            gas_parameter_proxy: r.gas_parameter_proxy,
        }
    }
}

/// One `N` of the fixed-`Na` sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub particles: usize,
    pub scattering_length: f64,
    pub gp: GpSummary,
    pub run: RunSummary,
    pub upper_bound: UpperBoundReport,
    pub gp_r2: f64,
    /// `⟨r²⟩_VMC − ⟨r²⟩_GP` per particle.
    pub r2_gap: Estimate,
    pub lower_bound: LowerBoundReport,
    /// `lower bound ≤ E_VMC + 3σ`.
    pub ordered: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResults {
    pub na: f64,
    pub constants_note: String,
    pub points: Vec<SweepPoint>,
    pub trend: TrendReport,
    /// `|r² gap|` never grows by more than the trend tolerance.
    pub r2_gap_decreasing: bool,
    pub ordered: bool,
}

#[derive(Serialize)]
struct TableRow {
    particles: usize,
    scattering_length: f64,
    e_gp: f64,
    e_vmc: f64,
    e_vmc_stderr: f64,
    upper_ratio: f64,
    upper_ratio_stderr: f64,
    implied_constant: f64,
    e_gp_box: f64,
    lower_bound: f64,
    lower_ratio: f64,
    r2_gap: f64,
    r2_gap_stderr: f64,
}

impl From<&SweepPoint> for TableRow {
    fn from(p: &SweepPoint) -> Self {
        Self {
            particles: p.particles,
            scattering_length: p.scattering_length,
            e_gp: p.gp.energy,
            e_vmc: p.run.energy.mean,
            e_vmc_stderr: p.run.energy.stderr,
            upper_ratio: p.upper_bound.ratio,
            upper_ratio_stderr: p.upper_bound.ratio_stderr,
            implied_constant: p.upper_bound.implied_constant,
            e_gp_box: p.lower_bound.gp_box_energy,
            lower_bound: p.lower_bound.bound,
            lower_ratio: p.lower_bound.ratio,
            r2_gap: p.r2_gap.mean,
            r2_gap_stderr: p.r2_gap.stderr,
        }
    }
}

fn sweep_point(cfg: &SweepConfig, n: usize) -> Result<(SweepPoint, Vec<HistogramRow>)> {
    let a = cfg.na / n as f64;
    let pair = cfg.pair.potential(a)?;
    let (gp, run, _) = sample(n, a, &pair, &cfg.gp, &cfg.sampling, false)?;
    let gp_r = box_solve(n as f64, a, cfg.ball_radius, &cfg.gp)?;
    let lower = assemble_lower_bound(
        &gp_r,
        optimal_side(n as f64, cfg.side_factor),
        &cfg.constants,
        EnergyModel::Rigorous,
    )?;
    let profile = density_histogram(&run.histogram);
    let density = compare_density(&profile, |r| gp.density_at(r) / n as f64);
    let r2_gp = gp_r2(&gp);
    let point = SweepPoint {
        particles: n,
        scattering_length: a,
        gp: gp.summary(),
        upper_bound: upper_bound_check(&run.energy, &gp),
        gp_r2: r2_gp,
        r2_gap: Estimate {
            mean: run.r2.mean - r2_gp,
            ..run.r2
        },
        ordered: lower.bound <= run.energy.mean + 3.0 * run.energy.stderr,
        lower_bound: lower,
        run: RunSummary::from(&run),
    };
    Ok((point, histogram_rows(&profile, &density)))
}

/// `|gap|` never grows by more than [`TREND_SIGMAS`] combined σ.
pub fn gap_decreasing(gaps: &[Estimate]) -> bool {
    gaps.windows(2).all(|w| {
        let sigma = w[0].stderr.hypot(w[1].stderr);
        w[1].mean.abs() <= w[0].mean.abs() + TREND_SIGMAS * sigma
    })
}

/// Points run in parallel; artifacts are written in increasing `N`. The
/// first failure is returned after the finished points are written.
pub fn sweep_study(
    cfg: &SweepConfig,
    baseline_max_constant: Option<f64>,
    out: &mut OutputDir,
) -> Result<SweepResults> {
    use rayon::prelude::*;
    cfg.constants.validate()?;
    let computed: Vec<Result<(SweepPoint, Vec<HistogramRow>)>> = cfg
        .particles
        .par_iter()
        .map(|&n| sweep_point(cfg, n))
        .collect();
    let mut points = Vec::new();
    let mut failure = None;
    for (n, r) in cfg.particles.iter().zip(computed) {
        match r {
            Ok((point, rows)) => {
                out.csv(&format!("histogram_N{n}.csv"), &rows)?;
                points.push(point);
            }
            Err(e) => {
                log::error!("sweep point N = {n} failed: {e}");
                failure.get_or_insert(e);
            }
        }
    }
    out.csv(
        "table.csv",
        &points.iter().map(TableRow::from).collect::<Vec<_>>(),
    )?;
    let reports: Vec<UpperBoundReport> = points.iter().map(|p| p.upper_bound).collect();
    let gaps: Vec<Estimate> = points.iter().map(|p| p.r2_gap).collect();
    let results = SweepResults {
        na: cfg.na,
        constants_note: BoundConstants::DEFAULT_LABEL.into(),
        trend: sweep_trend(&reports, baseline_max_constant),
        r2_gap_decreasing: gap_decreasing(&gaps),
        ordered: points.iter().all(|p| p.ordered),
        points,
    };
    out.json(RESULTS, &results)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(results),
    }
}
