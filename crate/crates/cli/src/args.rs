//! Command-line grammar and its resolution into [`RunConfig`]s.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dilute_bose::boxmethod::EnergyModel;
use dilute_bose::homog::BoundConstants;
use dilute_bose::potential::TabulatedPotential;
use dilute_bose::scattering::{default_r_max, default_step};
use dilute_bose::vmc::VmcConfig;
use dilute_bose::{Error, GpOptions, PairPotential, Result, TrapPotential};

use crate::config::*;
use crate::output::Manifest;

#[derive(Debug, Parser)]
#[command(
    name = "dilute-bose",
    version,
    about = "Trapped dilute Bose gas: GP, VMC and lower-bound pipelines"
)]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Compare results with a previous results.json.
    #[arg(long, global = true)]
    pub baseline: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zero-energy scattering length of a pair potential.
    Scatter(ScatterArgs),
    /// Gross–Pitaevskii ground state.
    Gp(GpArgs),
    /// Homogeneous-gas bound ratios over a range of Y.
    Homog(HomogArgs),
    /// Variational Monte Carlo upper bound.
    Vmc(VmcArgs),
    /// Cell-partition lower bound and its side-length study.
    Boxes(BoxesArgs),
    /// Fixed-Na sweep in N combining GP, VMC and the lower bound.
    Sweep(SweepArgs),
    /// Re-run the configuration recorded in a manifest.
    Rerun { manifest: PathBuf },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PotentialArgs {
    /// Hard sphere of radius R.
    #[arg(long, value_name = "R")]
    hard_sphere: Option<f64>,
    /// Soft sphere of height V0 and radius R.
    #[arg(long, num_args = 2, value_names = ["V0", "R"])]
    soft_sphere: Option<Vec<f64>>,
    /// Two-column table with a `# tail_exponent = p` header.
    #[arg(long, value_name = "FILE")]
    table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
}

/// `a` directly or through `Na`.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Coupling {
    #[arg(long = "a")]
    a: Option<f64>,
    /// `a = Na/N`.
    #[arg(long = "Na")]
    na: Option<f64>,
}

impl Coupling {
    fn resolve(&self, n: f64) -> Result<f64> {
        let a = match (self.a, self.na) {
            (Some(a), _) => a,
            (None, Some(na)) => na / n,
            (None, None) => return Err(Error::Invalid("either --a or --Na is required".into())),
        };
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::Invalid(format!(
                "scattering length must be ≥ 0, got {a}"
            )));
        }
        Ok(a)
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// GP grid spacing.
    #[arg(long, default_value_t = GpOptions::default().spacing)]
    spacing: f64,
    /// Outer radius of the whole-space GP grid.
    #[arg(long, default_value_t = GpOptions::default().r_out)]
    r_out: f64,
    #[arg(long, default_value_t = GpOptions::default().tolerance)]
    tolerance: f64,
    #[arg(long, default_value_t = GpOptions::default().max_iterations)]
    max_iterations: usize,
}

impl GridArgs {
    fn options(&self) -> GpOptions {
        GpOptions {
            spacing: self.spacing,
            r_out: self.r_out,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            ..GpOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TrapKind {
    Harmonic,
    Flat,
}

#[derive(Debug, Args)]
pub struct GpArgs {
    #[arg(long, value_enum, default_value = "harmonic")]
    trap: TrapKind,
    #[arg(long = "N")]
    n: f64,
    #[command(flatten)]
    coupling: Coupling,
    /// Solve in a Neumann ball of this radius instead of the whole space.
    #[arg(long)]
    ball_radius: Option<f64>,
    /// δN for the finite-difference check of λ = dE/dN.
    #[arg(long)]
    delta_n: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[arg(long = "C", default_value_t = BoundConstants::default().c)]
    c: f64,
    #[arg(long = "C-prime", default_value_t = BoundConstants::default().c_prime)]
    c_prime: f64,
    #[arg(long, default_value_t = BoundConstants::default().delta)]
    delta: f64,
}

impl ConstantArgs {
    fn constants(&self) -> BoundConstants {
        BoundConstants {
            c: self.c,
            c_prime: self.c_prime,
            delta: self.delta,
        }
    }
}

#[derive(Debug, Args)]
pub struct HomogArgs {
    /// Range `lo:hi` of the gas parameter Y.
    #[arg(long = "sweep-Y", value_name = "LO:HI", default_value = "1e-8:1e-2")]
    sweep_y: String,
    /// Log-spaced points including both ends.
    #[arg(long, default_value_t = 7)]
    points: usize,
    #[command(flatten)]
    constants: ConstantArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PairKind {
    HardSphere,
    SoftSphere,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Pair shape, rescaled to the requested a.
    #[arg(long, value_enum, default_value = "hard-sphere")]
    pair: PairKind,
    /// Height of the unit-radius soft sphere before rescaling.
    #[arg(long, default_value_t = 100.0)]
    soft_height: f64,
}

impl PairArgs {
    fn shape(&self) -> PairShape {
        match self.pair {
            PairKind::HardSphere => PairShape::HardSphere,
            PairKind::SoftSphere => PairShape::SoftSphere {
                height: self.soft_height,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = VmcConfig::default().walkers)]
    walkers: usize,
    /// Recorded sweeps per walker (default depends on the command).
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long, default_value_t = VmcConfig::default().burn_in)]
    burn_in: usize,
    #[arg(long, default_value_t = VmcConfig::default().seed)]
    seed: u64,
    #[arg(long, default_value_t = VmcConfig::default().fd_step)]
    fd_step: f64,
    #[arg(long, default_value_t = VmcConfig::default().histogram_radius)]
    histogram_radius: f64,
    #[arg(long, default_value_t = VmcConfig::default().histogram_bins)]
    bins: usize,
    #[arg(long, default_value_t = VmcConfig::default().batches)]
    batches: usize,
}

impl SamplingArgs {
    fn config(&self, default_sweeps: usize) -> VmcConfig {
        VmcConfig {
            walkers: self.walkers,
            burn_in: self.burn_in,
            sweeps: self.sweeps.unwrap_or(default_sweeps),
            seed: self.seed,
            fd_step: self.fd_step,
            histogram_radius: self.histogram_radius,
            histogram_bins: self.bins,
            batches: self.batches,
            ..VmcConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct VmcArgs {
    #[arg(long = "N")]
    n: usize,
    #[command(flatten)]
    coupling: Coupling,
    #[command(flatten)]
    pair: PairArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Also run an independent chain for the energy decomposition check.
    #[arg(long)]
    decomposition: bool,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModelKind {
    Rigorous,
    LeadingOrder,
}

#[derive(Debug, Args)]
pub struct BoxesArgs {
    #[arg(long = "N")]
    n: f64,
    #[command(flatten)]
    coupling: Coupling,
    #[arg(long, default_value_t = 8.0)]
    ball_radius: f64,
    #[arg(long, value_enum, default_value = "rigorous")]
    model: ModelKind,
    /// c in L* = c N^(-1/10).
    #[arg(long, default_value_t = 1.0)]
    side_factor: f64,
    /// Study sides L* 2^j for |j| ≤ levels.
    #[arg(long, default_value_t = 2)]
    levels: i32,
    #[command(flatten)]
    constants: ConstantArgs,
    #[command(flatten)]
    grid: GridArgs,
}

/// Sweeps per walker of the N-sweep: 10⁶ samples per point with the
/// default four walkers.
pub const SWEEP_DEFAULT_SWEEPS: usize = 250_000;

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long = "Na")]
    na: f64,
    /// Comma-separated particle numbers.
    #[arg(long = "N", value_delimiter = ',', default_value = "2,4,8,16")]
    n: Vec<usize>,
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, default_value_t = 8.0)]
    ball_radius: f64,
    #[arg(long, default_value_t = 1.0)]
    side_factor: f64,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[command(flatten)]
    constants: ConstantArgs,
    #[command(flatten)]
    grid: GridArgs,
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::Invalid(format!("expected LO:HI, got {s:?}")))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|e| Error::Invalid(format!("{x:?}: {e}")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

impl Command {
    /// Resolves the arguments into a full configuration. Table files are
    /// read here so that the configuration is self-contained.
    pub fn resolve(&self) -> Result<RunConfig> {
        Ok(match self {
            Command::Scatter(s) => {
                let p = &s.potential;
                let potential = if let Some(r) = p.hard_sphere {
                    PairPotential::hard_sphere(r)?
                } else if let Some(v) = &p.soft_sphere {
                    PairPotential::soft_sphere(v[0], v[1])?
                } else if let Some(path) = &p.table {
                    PairPotential::Tabulated(TabulatedPotential::from_path(path)?)
                } else {
                    return Err(Error::Invalid("no pair potential given".into()));
                };
                RunConfig::Scatter(ScatterConfig {
                    r_max: s.r_max.unwrap_or_else(|| default_r_max(&potential)),
                    step: s.step.unwrap_or_else(|| default_step(&potential)),
                    potential,
                })
            }
            Command::Gp(g) => RunConfig::Gp(GpConfig {
                trap: match g.trap {
                    TrapKind::Harmonic => TrapPotential::harmonic(),
                    TrapKind::Flat => TrapPotential::flat(),
                },
                particles: g.n,
                scattering_length: g.coupling.resolve(g.n)?,
                ball_radius: g.ball_radius,
                options: g.grid.options(),
                delta_n: g.delta_n,
            }),
            Command::Homog(h) => {
                let (y_min, y_max) = parse_range(&h.sweep_y)?;
                RunConfig::Homog(HomogConfig {
                    y_min,
                    y_max,
                    points: h.points,
                    constants: h.constants.constants(),
                })
            }
            Command::Vmc(v) => RunConfig::Vmc(VmcRunConfig {
                particles: v.n,
                scattering_length: v.coupling.resolve(v.n as f64)?,
                pair: v.pair.shape(),
                gp: v.grid.options(),
                sampling: v.sampling.config(VmcConfig::default().sweeps),
                decomposition: v.decomposition,
            }),
            Command::Boxes(b) => RunConfig::Boxes(BoxesConfig {
                particles: b.n,
                scattering_length: b.coupling.resolve(b.n)?,
                ball_radius: b.ball_radius,
                gp: b.grid.options(),
                constants: b.constants.constants(),
                model: match b.model {
                    ModelKind::Rigorous => EnergyModel::Rigorous,
                    ModelKind::LeadingOrder => EnergyModel::LeadingOrder,
                },
                side_factor: b.side_factor,
                levels: b.levels,
            }),
            Command::Sweep(s) => {
                let mut particles = s.n.clone();
                particles.sort_unstable();
                particles.dedup();
                if particles.is_empty() || particles[0] == 0 {
                    return Err(Error::Invalid("particle numbers must be positive".into()));
                }
                RunConfig::Sweep(SweepConfig {
                    na: s.na,
                    particles,
                    pair: s.pair.shape(),
                    ball_radius: s.ball_radius,
                    gp: s.grid.options(),
                    sampling: s.sampling.config(SWEEP_DEFAULT_SWEEPS),
                    constants: s.constants.constants(),
                    side_factor: s.side_factor,
                })
            }
            Command::Rerun { manifest } => Manifest::read(manifest)?.config,
        })
    }
}
