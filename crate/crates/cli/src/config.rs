//! Fully resolved run configurations, as echoed in run manifests.

use serde::{Deserialize, Serialize};

use dilute_bose::boxmethod::EnergyModel;
use dilute_bose::homog::BoundConstants;
use dilute_bose::scattering::{rescale_pair, scatter};
use dilute_bose::vmc::VmcConfig;
use dilute_bose::{GpOptions, PairPotential, Result, TrapPotential};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Scatter(ScatterConfig),
    Gp(GpConfig),
    Homog(HomogConfig),
    Vmc(VmcRunConfig),
    Boxes(BoxesConfig),
    Sweep(SweepConfig),
}

impl RunConfig {
    pub fn name(&self) -> &'static str {
        match self {
            RunConfig::Scatter(_) => "scatter",
            RunConfig::Gp(_) => "gp",
            RunConfig::Homog(_) => "homog",
            RunConfig::Vmc(_) => "vmc",
            RunConfig::Boxes(_) => "boxes",
            RunConfig::Sweep(_) => "sweep",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterConfig {
    pub potential: PairPotential,
    pub r_max: f64,
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpConfig {
    pub trap: TrapPotential,
    pub particles: f64,
    pub scattering_length: f64,
    /// Neumann ball radius; whole space when absent.
    pub ball_radius: Option<f64>,
    pub options: GpOptions,
    /// `δN` of the finite-difference chemical-potential check.
    pub delta_n: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogConfig {
    pub y_min: f64,
    pub y_max: f64,
    pub points: usize,
    pub constants: BoundConstants,
}

/// Shape of the pair potential; it is rescaled to the requested `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PairShape {
    HardSphere,
    /// Soft sphere of this height and unit radius before rescaling.
    SoftSphere {
        height: f64,
    },
}

impl PairShape {
    /// Potential of this shape with scattering length `a`, or `v ≡ 0` at
    /// `a = 0`.
    pub fn potential(&self, a: f64) -> Result<PairPotential> {
        if a == 0.0 {
            return PairPotential::soft_sphere(0.0, 1.0);
        }
        match *self {
            PairShape::HardSphere => PairPotential::hard_sphere(a),
            PairShape::SoftSphere { height } => {
                let template = PairPotential::soft_sphere(height, 1.0)?;
                let (_, a1) = scatter(&template)?;
                rescale_pair(&template, a1.value, a)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VmcRunConfig {
    pub particles: usize,
    pub scattering_length: f64,
    pub pair: PairShape,
    pub gp: GpOptions,
    pub sampling: VmcConfig,
    /// Also run the independent chain for the energy decomposition.
    pub decomposition: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxesConfig {
    pub particles: f64,
    pub scattering_length: f64,
    pub ball_radius: f64,
    pub gp: GpOptions,
    pub constants: BoundConstants,
    pub model: EnergyModel,
    /// `c` in `L* = c N^{−1/10}`.
    pub side_factor: f64,
    /// The study uses `L* 2^j` for `|j| ≤ levels`.
    pub levels: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Fixed `Na`; each point uses `a = Na/N`.
    pub na: f64,
    pub particles: Vec<usize>,
    pub pair: PairShape,
    pub ball_radius: f64,
    pub gp: GpOptions,
    pub sampling: VmcConfig,
    pub constants: BoundConstants,
    pub side_factor: f64,
}
