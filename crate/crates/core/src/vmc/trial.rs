//! Trial state `Ψ = Π Φ(x_i) · Π f(t_i)` and its local energy.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gp::GpResult;
use crate::potential::{PairPotential, TrapPotential};
use crate::scattering::PairFactor;
use crate::spline::UniformSpline;

pub type Point = [f64; 3];

fn dist(x: &Point, y: &Point) -> f64 {
    ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt()
}

/// `t_i = min_{j<i} |x_i − x_j|`, with `t_1 = ∞`.
pub fn nearest_neighbor_distances(positions: &[Point]) -> Vec<f64> {
    (0..positions.len())
        .map(|i| {
            positions[..i]
                .iter()
                .map(|y| dist(&positions[i], y))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// One-body factor `Φ` of the trial state, stored as `ln Φ`.
#[derive(Clone, Debug)]
pub enum OneBody {
    /// `ln Φ = log_norm − ω r²/2`, the exact orbital of `V = ω² r²` at `a = 0`.
    Gaussian {
        omega: f64,
        log_norm: f64,
    },
    Spline(UniformSpline),
}

impl OneBody {
    /// Gaussian normalized to `∫Φ² = particles`.
    pub fn gaussian(omega: f64, particles: f64) -> Self {
        let log_norm = 0.5 * particles.ln() + 0.75 * (omega / PI).ln();
        OneBody::Gaussian { omega, log_norm }
    }

    /// Spline of `ln Φ` through the grid values, dropping nodes where `Φ`
    /// has been pinned to zero by a decay boundary.
    pub fn from_values(spacing: f64, values: &[f64]) -> Result<Self> {
        let usable = values.iter().take_while(|v| **v > 0.0).count();
        if usable < 4 {
            return Err(Error::invalid("orbital is not positive near the origin"));
        }
        let keep = if usable == values.len() {
            usable
        } else {
            usable - 1
        };
        let logs = values[..keep].iter().map(|v| v.ln()).collect();
        Ok(OneBody::Spline(UniformSpline::new(spacing, logs, 0.0)))
    }

    /// `ln Φ(r)`.
    pub fn log(&self, r: f64) -> f64 {
        match self {
            OneBody::Gaussian { omega, log_norm } => log_norm - 0.5 * omega * r * r,
            OneBody::Spline(s) => s.eval(r).0,
        }
    }

    /// `(ln Φ, ∇ ln Φ, Δ ln Φ)` at `x`.
    pub fn derivatives(&self, x: &Point) -> (f64, Point, f64) {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        match self {
            OneBody::Gaussian { omega, log_norm } => (
                log_norm - 0.5 * omega * r * r,
                [-omega * x[0], -omega * x[1], -omega * x[2]],
                -3.0 * omega,
            ),
            OneBody::Spline(s) => {
                let (g, dg, d2g) = s.eval(r);
                if r < 1e-8 {
                    // g'(r)/r → g''(0) for an even function
                    return (g, [d2g * x[0], d2g * x[1], d2g * x[2]], 3.0 * d2g);
                }
                let c = dg / r;
                (g, [c * x[0], c * x[1], c * x[2]], d2g + 2.0 * c)
            }
        }
    }
}

/// `Ψ(x₁…x_N) = Π Φ(x_i) Π f(t_i)`; without a pair factor `f ≡ 1`.
#[derive(Clone, Debug)]
pub struct TrialWavefunction {
    pub one_body: OneBody,
    pub pair: Option<PairFactor>,
    pub particles: usize,
    /// Scattering length of the GP problem the orbital solves.
    pub gp_scattering_length: f64,
}

impl TrialWavefunction {
    /// Builds the trial from a GP minimizer. For the non-interacting
    /// harmonic problem the exact Gaussian is used instead of the grid
    /// interpolant.
    pub fn from_gp(gp: &GpResult, pair: Option<PairFactor>) -> Result<Self> {
        let n = gp.particles();
        if n < 1.0 || n.fract() != 0.0 {
            return Err(Error::invalid("VMC needs an integer particle number ≥ 1"));
        }
        let one_body = match gp.problem.trap {
            TrapPotential::Harmonic { stiffness } if gp.scattering_length() == 0.0 => {
                OneBody::gaussian(stiffness.sqrt(), n)
            }
            _ => OneBody::from_values(gp.orbital.grid.spacing, &gp.orbital.values)?,
        };
        Ok(Self {
            one_body,
            pair,
            particles: n as usize,
            gp_scattering_length: gp.scattering_length(),
        })
    }

    pub fn ln_f(&self, t: f64) -> f64 {
        match &self.pair {
            Some(f) if t.is_finite() => f.ln_value(t),
            _ => 0.0,
        }
    }

    /// Core radius of `f`, if it vanishes on a ball.
    pub fn core(&self) -> Option<f64> {
        self.pair.as_ref().and_then(|f| f.core_radius())
    }
}

/// `ln Ψ`; `−∞` inside a hard core.
pub fn log_trial(trial: &TrialWavefunction, positions: &[Point]) -> f64 {
    let one: f64 = positions
        .iter()
        .map(|x| {
            trial
                .one_body
                .log((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt())
        })
        .sum();
    let pair: f64 = nearest_neighbor_distances(positions)
        .into_iter()
        .map(|t| trial.ln_f(t))
        .sum();
    one + pair
}

/// Configuration with cached nearest-neighbour data so that single
/// particle moves cost `O(N)`.
#[derive(Clone, Debug)]
pub struct PairCache {
    pub positions: Vec<Point>,
    /// `t_i`, `∞` for the first particle.
    t: Vec<f64>,
    /// Index of the nearest lower-labelled particle.
    nn: Vec<usize>,
    ln_f: Vec<f64>,
}

impl PairCache {
    pub fn new(trial: &TrialWavefunction, positions: Vec<Point>) -> Self {
        let n = positions.len();
        let mut cache = Self {
            positions,
            t: vec![f64::INFINITY; n],
            nn: vec![usize::MAX; n],
            ln_f: vec![0.0; n],
        };
        for i in 1..n {
            let (t, j) = cache.nearest_below(i, i, &cache.positions[i]);
            cache.t[i] = t;
            cache.nn[i] = j;
            cache.ln_f[i] = trial.ln_f(t);
        }
        cache
    }

    pub fn ln_f_total(&self) -> f64 {
        self.ln_f.iter().sum()
    }

    pub fn distances(&self) -> &[f64] {
        &self.t
    }

    /// Nearest particle with label `< k` to `x_k`, where particle `moved`
    /// is taken at `x` (pass `moved = k` to use current positions).
    fn nearest_below(&self, k: usize, moved: usize, x: &Point) -> (f64, usize) {
        let xk = if moved == k { x } else { &self.positions[k] };
        let mut best = (f64::INFINITY, usize::MAX);
        for j in 0..k {
            let y = if j == moved { x } else { &self.positions[j] };
            let d = dist(xk, y);
            if d < best.0 {
                best = (d, j);
            }
        }
        best
    }

    /// Visits every `k` whose `(t_k, nn_k)` changes when particle `i` moves
    /// to `x`, passing the new values.
    fn changes(&self, i: usize, x: &Point, mut visit: impl FnMut(usize, f64, usize)) {
        if i > 0 {
            let (t, j) = self.nearest_below(i, i, x);
            visit(i, t, j);
        }
        for k in i + 1..self.positions.len() {
            if self.nn[k] == i {
                let (t, j) = self.nearest_below(k, i, x);
                visit(k, t, j);
            } else {
                let d = dist(&self.positions[k], x);
                if d < self.t[k] {
                    visit(k, d, i);
                }
            }
        }
    }

    /// `ln F(x_i → x) − ln F`.
    pub fn delta_ln_f(&self, trial: &TrialWavefunction, i: usize, x: &Point) -> f64 {
        if trial.pair.is_none() {
            return 0.0;
        }
        let mut delta = 0.0;
        self.changes(i, x, |k, t, _| {
            delta += trial.ln_f(t) - self.ln_f[k];
        });
        delta
    }

    pub fn apply(&mut self, trial: &TrialWavefunction, i: usize, x: Point) {
        let mut updates = Vec::new();
        self.changes(i, &x, |k, t, j| updates.push((k, t, j)));
        for (k, t, j) in updates {
            self.t[k] = t;
            self.nn[k] = j;
            self.ln_f[k] = trial.ln_f(t);
        }
        self.positions[i] = x;
    }
}

/// Local energy together with the sample of the quadratic-form integrand
/// used by the energy decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalSample {
    pub energy: f64,
    /// `Σ_i [−Δ_i F/F − 2∇ ln Φ(x_i)·∇_i F/F] + Σ v − 8πa Σ_i ρ(x_i)`.
    pub quadratic_form: f64,
    /// Coordinates whose derivative used a one-sided stencil.
    pub one_sided: usize,
}

/// `∂F/F` and `∂²F/F` along one coordinate from the ratios
/// `F(x ± k h)/F(x) = exp(ln F(x ± k h) − ln F(x))`. `F` stays smooth up to
/// a hard core, where it vanishes, so a stencil point inside the core falls
/// back to a second-order one-sided stencil on the other side.
fn fd_derivatives(shift: impl Fn(f64) -> f64, h: f64) -> (f64, f64, bool) {
    let ratio = |s: f64| shift(s).exp();
    let (plus, minus) = (ratio(h), ratio(-h));
    if plus > 0.0 && minus > 0.0 {
        return (
            (plus - minus) / (2.0 * h),
            (plus + minus - 2.0) / (h * h),
            false,
        );
    }
    let s = if minus > 0.0 { -1.0 } else { 1.0 };
    let (r1, r2, r3) = (ratio(s * h), ratio(2.0 * s * h), ratio(3.0 * s * h));
    let first = s * (-3.0 + 4.0 * r1 - r2) / (2.0 * h);
    let second = (2.0 - 5.0 * r1 + 4.0 * r2 - r3) / (h * h);
    (first, second, true)
}

/// `E_L = HΨ/Ψ` with `ΔF/F` and `∇F/F` from central differences of step
/// `h` (one-sided next to a hard core). Hard-core pairs contribute nothing
/// wherever `Ψ > 0`.
pub fn local_energy(
    trial: &TrialWavefunction,
    cache: &PairCache,
    v: &PairPotential,
    trap: &TrapPotential,
    h: f64,
) -> LocalSample {
    let positions = &cache.positions;
    let mut kinetic = 0.0;
    let mut cross = 0.0;
    let mut external = 0.0;
    let mut density = 0.0;
    let mut one_sided = 0;
    for (i, x) in positions.iter().enumerate() {
        let (g, grad_g, lap_g) = trial.one_body.derivatives(x);
        external += trap.value((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt());
        density += (2.0 * g).exp();
        // −ΔΨ/Ψ = −ΔΦ/Φ − ΔF/F − 2∇lnΦ·∇F/F
        let grad2: f64 = grad_g.iter().map(|d| d * d).sum();
        kinetic += -lap_g - grad2;
        if trial.pair.is_some() {
            for c in 0..3 {
                let shift = |s: f64| {
                    let mut y = *x;
                    y[c] += s;
                    cache.delta_ln_f(trial, i, &y)
                };
                let (d1, d2, flagged) = fd_derivatives(shift, h);
                one_sided += flagged as usize;
                let term = -d2 - 2.0 * grad_g[c] * d1;
                kinetic += term;
                cross += term;
            }
        }
    }
    let mut pair = 0.0;
    if !matches!(v, PairPotential::HardSphere { .. }) {
        for i in 0..positions.len() {
            for j in 0..i {
                pair += v.value(dist(&positions[i], &positions[j]));
            }
        }
    }
    let a = trial.gp_scattering_length;
    LocalSample {
        energy: kinetic + external + pair,
        quadratic_form: cross + pair - 8.0 * PI * a * density,
        one_sided,
    }
}
