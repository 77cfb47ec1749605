//! Gross–Pitaevskii ground states for radial traps.
//!
//! The functional `∫ (|∇Φ|² + V|Φ|² + 4πa|Φ|⁴)` is minimized under
//! `∫|Φ|² = N`. For a radial trap the minimizer is radial, and with
//! `u(r) = rΦ(r)` the problem becomes one-dimensional:
//!
//! ```text
//! E[u] = 4π ∫ (u'² + V u² + 4πa u⁴/r²) dr − 4π u(R)²/R    (Neumann ball of radius R)
//! ```
//!
//! The discrete energy uses forward differences for `u'` and trapezoid
//! weights, and every operator below (Hamiltonian, gradient, residual) is
//! derived from that one discrete functional, so the discrete GP equation
//! is exactly its Euler–Lagrange equation. The Neumann condition `Φ'(R) = 0`
//! is the natural boundary condition of the functional (`u'(R) = u(R)/R`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Boundary, RadialGrid};
use crate::potential::TrapPotential;
use crate::spline::{thomas, UniformSpline};

/// Solver settings shared by trap and box solves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GpOptions {
    /// Outer radius of the whole-space grid (ignored by box solves).
    pub r_out: f64,
    pub spacing: f64,
    /// Target for the normalized residual of the GP equation.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// The trap must exceed this multiple of `max(λ, 1)` at `r_out`.
    pub confinement_factor: f64,
}

impl Default for GpOptions {
    fn default() -> Self {
        Self {
            r_out: 10.0,
            spacing: 1e-3,
            tolerance: 1e-8,
            max_iterations: 200_000,
            confinement_factor: 5.0,
        }
    }
}

/// Fully specified GP problem; enough to re-solve at a different `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpProblem {
    pub trap: TrapPotential,
    pub particles: f64,
    pub scattering_length: f64,
    pub grid: RadialGrid,
    pub tolerance: f64,
    pub max_iterations: usize,
}

/// Values of `Φ` at the grid nodes, normalized to `particles`.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbital {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
    pub particles: f64,
}

impl Orbital {
    /// Samples `phi` at the nodes and rescales to `4π∫Φ²r²dr = particles`.
    pub fn from_fn(grid: RadialGrid, particles: f64, phi: impl Fn(f64) -> f64) -> Self {
        let values = grid.radii().map(phi).collect();
        let mut orbital = Self {
            grid,
            values,
            particles,
        };
        orbital.normalize();
        orbital
    }

    fn from_reduced(grid: RadialGrid, u: &[f64], particles: f64) -> Self {
        let h = grid.spacing;
        let mut values: Vec<f64> = u
            .iter()
            .enumerate()
            .map(|(k, &u)| if k == 0 { 0.0 } else { u / (k as f64 * h) })
            .collect();
        // Φ is even in r: Φ(0) = (4Φ(h) − Φ(2h))/3 + O(h⁴).
        values[0] = (4.0 * values[1] - values[2]) / 3.0;
        Self {
            grid,
            values,
            particles,
        }
    }

    /// `u = rΦ` at the nodes (with the boundary value forced to zero on a
    /// decay grid).
    pub fn reduced(&self) -> Vec<f64> {
        let mut u: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &phi)| self.grid.radius(k) * phi)
            .collect();
        if self.grid.boundary == Boundary::Decay {
            *u.last_mut().unwrap() = 0.0;
        }
        u
    }

    /// `4π ∫ Φ² r² dr` with the same quadrature as the energy.
    pub fn norm(&self) -> f64 {
        mass(&self.grid, &self.reduced())
    }

    fn normalize(&mut self) {
        let s = (self.particles / self.norm()).sqrt();
        self.values.iter_mut().for_each(|v| *v *= s);
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v * v).collect()
    }

    /// Cubic spline of `ln Φ` (clamped to zero slope at the origin).
    pub fn log_spline(&self) -> Result<UniformSpline> {
        if self.values.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::invalid("orbital must be strictly positive for ln Φ"));
        }
        let logs = self.values.iter().map(|v| v.ln()).collect();
        Ok(UniformSpline::new(self.grid.spacing, logs, 0.0))
    }
}

/// Parts of the GP energy; `total` is their sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyComponents {
    pub kinetic: f64,
    pub trap: f64,
    pub interaction: f64,
    pub total: f64,
}

/// Converged (or best-so-far) minimizer with its derived scalars.
#[derive(Clone, Debug)]
pub struct GpResult {
    pub problem: GpProblem,
    pub orbital: Orbital,
    pub components: EnergyComponents,
    /// GP eigenvalue, computed as the Rayleigh quotient of the mean-field
    /// operator.
    pub chemical_potential: f64,
    pub mean_density: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Grid minimum of the trap; the solver works with `V − trap_offset`.
    pub trap_offset: f64,
}

/// JSON-friendly scalar summary of a [`GpResult`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpSummary {
    pub problem: GpProblem,
    pub energy: f64,
    pub components: EnergyComponents,
    pub chemical_potential: f64,
    pub mean_density: f64,
    pub gas_parameter: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trap_offset: f64,
    pub min_density: f64,
}

impl GpResult {
    pub fn energy(&self) -> f64 {
        self.components.total
    }

    pub fn particles(&self) -> f64 {
        self.problem.particles
    }

    pub fn scattering_length(&self) -> f64 {
        self.problem.scattering_length
    }

    /// `Ȳ = 4π a³ ρ̄ / 3`.
    pub fn gas_parameter(&self) -> f64 {
        4.0 * PI * self.scattering_length().powi(3) * self.mean_density / 3.0
    }

    pub fn min_density(&self) -> f64 {
        self.orbital
            .values
            .iter()
            .map(|v| v * v)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn summary(&self) -> GpSummary {
        GpSummary {
            problem: self.problem.clone(),
            energy: self.energy(),
            components: self.components,
            chemical_potential: self.chemical_potential,
            mean_density: self.mean_density,
            gas_parameter: self.gas_parameter(),
            residual: self.residual,
            iterations: self.iterations,
            converged: self.converged,
            trap_offset: self.trap_offset,
            min_density: self.min_density(),
        }
    }

    /// Density `|Φ(r)|²` by linear interpolation between nodes; constant
    /// past the outer radius.
    pub fn density_at(&self, r: f64) -> f64 {
        let h = self.orbital.grid.spacing;
        let values = &self.orbital.values;
        let last = values.len() - 1;
        let x = r / h;
        if x >= last as f64 {
            return values[last] * values[last];
        }
        let k = x.floor() as usize;
        let t = x - k as f64;
        let (a, b) = (values[k] * values[k], values[k + 1] * values[k + 1]);
        a + t * (b - a)
    }
}

/// Discretized operator data for one problem.
struct Discretization {
    grid: RadialGrid,
    /// Trap shifted so that its grid minimum is zero; the shift is added
    /// back in reported energies and eigenvalues.
    trap: Vec<f64>,
    offset: f64,
    a: f64,
}

fn mass(grid: &RadialGrid, u: &[f64]) -> f64 {
    4.0 * PI
        * u.iter()
            .enumerate()
            .map(|(k, x)| grid.weight(k) * x * x)
            .sum::<f64>()
}

/// `∫|Φ|⁴ = 4π ∫ u⁴/r² dr`.
fn quartic(grid: &RadialGrid, u: &[f64]) -> f64 {
    4.0 * PI
        * u.iter()
            .enumerate()
            .skip(1)
            .map(|(k, x)| grid.weight(k) * x.powi(4) / grid.radius(k).powi(2))
            .sum::<f64>()
}

impl Discretization {
    fn new(grid: RadialGrid, trap: &TrapPotential, a: f64) -> (Self, f64) {
        let raw: Vec<f64> = grid.radii().map(|r| trap.value(r)).collect();
        let offset = raw.iter().copied().fold(f64::INFINITY, f64::min);
        let trap = raw.iter().map(|v| v - offset).collect();
        (
            Self {
                grid,
                trap,
                offset,
                a,
            },
            offset,
        )
    }

    fn last_free(&self) -> usize {
        match self.grid.boundary {
            Boundary::Decay => self.grid.intervals - 1,
            Boundary::Neumann => self.grid.intervals,
        }
    }

    fn energy(&self, u: &[f64]) -> EnergyComponents {
        let h = self.grid.spacing;
        let mut grad = u.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / h;
        if self.grid.boundary == Boundary::Neumann {
            grad -= u[self.grid.intervals].powi(2) / self.grid.r_out();
        }
        let kinetic = 4.0 * PI * grad;
        let trap = 4.0
            * PI
            * u.iter()
                .zip(&self.trap)
                .enumerate()
                .map(|(k, (x, v))| self.grid.weight(k) * v * x * x)
                .sum::<f64>()
            + self.offset * mass(&self.grid, u);
        let interaction = 4.0 * PI * self.a * quartic(&self.grid, u);
        EnergyComponents {
            kinetic,
            trap,
            interaction,
            total: kinetic + trap + interaction,
        }
    }

    /// `(K u)_k`: half the gradient of the discrete kinetic form.
    fn stiffness(&self, u: &[f64], k: usize) -> f64 {
        let h = self.grid.spacing;
        let m = self.grid.intervals;
        if k == m {
            (u[m] - u[m - 1]) / h - u[m] / self.grid.r_out()
        } else {
            (2.0 * u[k] - u[k - 1] - u[k + 1]) / h
        }
    }

    fn mean_field(&self, u: &[f64], k: usize) -> f64 {
        let r = self.grid.radius(k);
        self.trap[k] + 8.0 * PI * self.a * u[k] * u[k] / (r * r)
    }

    /// `H[u] u` at the free nodes (zero elsewhere).
    fn apply(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; u.len()];
        for k in 1..=self.last_free() {
            out[k] = self.stiffness(u, k) / self.grid.weight(k) + self.mean_field(u, k) * u[k];
        }
        out
    }

    /// Rayleigh quotient and normalized residual of the GP equation.
    fn eigen_residual(&self, u: &[f64]) -> (f64, f64) {
        let hu = self.apply(u);
        let w = |k: usize| self.grid.weight(k);
        let num: f64 = (1..=self.last_free()).map(|k| w(k) * u[k] * hu[k]).sum();
        let den: f64 = (1..=self.last_free()).map(|k| w(k) * u[k] * u[k]).sum();
        let shifted = num / den;
        let res: f64 = (1..=self.last_free())
            .map(|k| w(k) * (hu[k] - shifted * u[k]).powi(2))
            .sum();
        let lambda = shifted + self.offset;
        // Scale floor of 1 keeps the residual meaningful when λ → 0 (flat box).
        (lambda, res.sqrt() / (lambda.abs().max(1.0) * den.sqrt()))
    }

    /// Gradient of the discrete energy with respect to the node values of u.
    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; u.len()];
        for k in 1..=self.last_free() {
            let r = self.grid.radius(k);
            let w = self.grid.weight(k);
            g[k] = 4.0
                * PI
                * (2.0 * self.stiffness(u, k)
                    + 2.0 * w * self.trap[k] * u[k]
                    + 16.0 * PI * self.a * w * u[k].powi(3) / (r * r));
        }
        g
    }

    /// One backward-Euler step of the normalized gradient flow with the
    /// nonlinearity frozen at the current iterate:
    /// `(1/dt + H[uⁿ]) u* = uⁿ/dt`, then rescale to the target norm.
    fn flow_step(&self, u: &[f64], dt: f64, particles: f64) -> Vec<f64> {
        let h = self.grid.spacing;
        let m = self.grid.intervals;
        let first = 1;
        let last = self.last_free();
        let n = last - first + 1;
        let mut lower = vec![-1.0 / h; n];
        let mut upper = vec![-1.0 / h; n];
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for (i, k) in (first..=last).enumerate() {
            let w = self.grid.weight(k);
            let kin = if k == m {
                1.0 / h - 1.0 / self.grid.r_out()
            } else {
                2.0 / h
            };
            diag[i] = kin + w * (1.0 / dt + self.mean_field(u, k));
            rhs[i] = w * u[k] / dt;
        }
        lower[0] = 0.0;
        upper[n - 1] = 0.0;
        let x = thomas(&lower, &diag, &upper, &rhs);
        let mut next = vec![0.0; u.len()];
        next[first..=last].copy_from_slice(&x);
        let s = (particles / mass(&self.grid, &next)).sqrt();
        next.iter_mut().for_each(|v| *v *= s);
        next
    }
}

fn check_inputs(particles: f64, a: f64) -> Result<()> {
    if !(particles > 0.0 && particles.is_finite()) {
        return Err(Error::invalid("particle number must be positive"));
    }
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::invalid(
            "scattering length must be nonnegative (repulsive interactions only)",
        ));
    }
    Ok(())
}

/// Evaluates the discrete GP functional at `orbital`.
pub fn gp_energy(orbital: &Orbital, trap: &TrapPotential, a: f64) -> Result<EnergyComponents> {
    if orbital.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("orbital contains non-finite values"));
    }
    check_inputs(orbital.particles, a)?;
    let (disc, _) = Discretization::new(orbital.grid, trap, a);
    Ok(disc.energy(&orbital.reduced()))
}

/// Gradient of [`gp_energy`] with respect to the node values of `Φ`
/// (zero at nodes that are not free: the origin and a decay edge).
pub fn gp_gradient(orbital: &Orbital, trap: &TrapPotential, a: f64) -> Vec<f64> {
    let (disc, _) = Discretization::new(orbital.grid, trap, a);
    let g = disc.gradient(&orbital.reduced());
    g.iter()
        .enumerate()
        .map(|(k, gu)| gu * orbital.grid.radius(k))
        .collect()
}

/// `ρ̄ = (1/N) ∫ |Φ|⁴`.
pub fn mean_density(orbital: &Orbital) -> f64 {
    quartic(&orbital.grid, &orbital.reduced()) / orbital.particles
}

/// Normalized residual `‖(−Δ + V + 8πa|Φ|²)Φ − λΦ‖ / (max(|λ|,1) ‖Φ‖)`.
pub fn gp_residual(result: &GpResult) -> f64 {
    let (disc, _) = Discretization::new(
        result.orbital.grid,
        &result.problem.trap,
        result.problem.scattering_length,
    );
    disc.eigen_residual(&result.orbital.reduced()).1
}

fn initial_guess(grid: &RadialGrid, trap: &TrapPotential) -> Vec<f64> {
    let width2 = match (trap, grid.boundary) {
        (TrapPotential::Harmonic { stiffness }, _) => 1.0 / stiffness.sqrt(),
        _ => (grid.r_out() / 3.0).powi(2),
    };
    let width2 = width2.min((grid.r_out() / 3.0).powi(2));
    grid.radii()
        .map(|r| r * (-0.5 * r * r / width2).exp())
        .collect()
}

/// Solves a fully specified problem by the normalized gradient flow.
pub fn solve(problem: &GpProblem) -> Result<GpResult> {
    check_inputs(problem.particles, problem.scattering_length)?;
    problem.trap.validate()?;
    let grid = problem.grid;
    let particles = problem.particles;
    let (disc, offset) = Discretization::new(grid, &problem.trap, problem.scattering_length);

    let mut u = initial_guess(&grid, &problem.trap);
    if grid.boundary == Boundary::Decay {
        *u.last_mut().unwrap() = 0.0;
    }
    let s = (particles / mass(&grid, &u)).sqrt();
    u.iter_mut().for_each(|v| *v *= s);

    let mut energy = disc.energy(&u).total;
    let (mut lambda, mut residual) = disc.eigen_residual(&u);
    let mut dt = 1.0;
    let mut iterations = 0;
    while residual > problem.tolerance && iterations < problem.max_iterations {
        iterations += 1;
        let next = disc.flow_step(&u, dt, particles);
        let e_next = disc.energy(&next).total;
        if e_next <= energy + 1e-13 * energy.abs().max(1.0) {
            u = next;
            energy = e_next;
            (lambda, residual) = disc.eigen_residual(&u);
            dt = (dt * 2.0).min(1e12);
        } else {
            dt *= 0.5;
            if dt < 1e-14 {
                break;
            }
        }
    }
    let converged = residual <= problem.tolerance;
    if !converged {
        log::warn!(
            "GP flow stopped after {iterations} iterations with residual {residual:e} \
             (tolerance {:e})",
            problem.tolerance
        );
    }

    let orbital = Orbital::from_reduced(grid, &u, particles);
    let components = disc.energy(&u);
    let mean_density = quartic(&grid, &u) / particles;
    Ok(GpResult {
        problem: problem.clone(),
        orbital,
        components,
        chemical_potential: lambda,
        mean_density,
        residual,
        iterations,
        converged,
        trap_offset: offset,
    })
}

fn problem(
    trap: &TrapPotential,
    grid: RadialGrid,
    particles: f64,
    a: f64,
    opts: &GpOptions,
) -> GpProblem {
    GpProblem {
        trap: trap.clone(),
        particles,
        scattering_length: a,
        grid,
        tolerance: opts.tolerance,
        max_iterations: opts.max_iterations,
    }
}

/// Whole-space GP minimizer on `[0, opts.r_out]`.
///
/// Fails if the trap does not rise above `confinement_factor · max(λ, 1)`
/// (both measured from the trap minimum) at the outer radius, i.e. if the grid is too small to hold the cloud.
pub fn minimize(
    trap: &TrapPotential,
    particles: f64,
    a: f64,
    opts: &GpOptions,
) -> Result<GpResult> {
    let grid = RadialGrid::new(opts.r_out, opts.spacing, Boundary::Decay)?;
    let result = solve(&problem(trap, grid, particles, a, opts))?;
    let edge = trap.value(grid.r_out()) - result.trap_offset;
    let scale = (result.chemical_potential - result.trap_offset).max(1.0);
    if edge < opts.confinement_factor * scale {
        return Err(Error::invalid(format!(
            "trap does not confine on this grid: V(r_out) = {edge} is below \
             {} × max(λ − min V, 1) with λ = {}",
            opts.confinement_factor, result.chemical_potential
        )));
    }
    Ok(result)
}

/// GP minimizer in the ball of radius `radius` with Neumann conditions.
/// The returned density is checked to be strictly positive everywhere.
pub fn solve_in_box(
    trap: &TrapPotential,
    radius: f64,
    particles: f64,
    a: f64,
    opts: &GpOptions,
) -> Result<GpResult> {
    let grid = RadialGrid::new(radius, opts.spacing, Boundary::Neumann)?;
    let result = solve(&problem(trap, grid, particles, a, opts))?;
    if !(result.min_density() > 0.0) {
        return Err(Error::NonConvergence(format!(
            "Neumann density is not bounded away from zero (min ρ = {})",
            result.min_density()
        )));
    }
    Ok(result)
}

/// `λ` together with two independent checks of `λ = dE/dN = E/N + 4πaρ̄`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChemicalPotentialReport {
    pub lambda: f64,
    /// `E/N + 4πaρ̄`.
    pub identity: f64,
    pub identity_discrepancy: f64,
    /// `[E(N+δN) − E(N−δN)] / 2δN`, if both re-solves converged.
    pub finite_difference: Option<f64>,
    pub finite_difference_discrepancy: Option<f64>,
}

/// Evaluates the chemical-potential identity and, when `delta_n` is given,
/// the centered finite difference of the energy in `N` (relative
/// discrepancies).
pub fn chemical_potential(
    result: &GpResult,
    delta_n: Option<f64>,
) -> Result<ChemicalPotentialReport> {
    let n = result.particles();
    let a = result.scattering_length();
    let lambda = result.chemical_potential;
    let identity = result.energy() / n + 4.0 * PI * a * result.mean_density;
    let identity_discrepancy = (lambda - identity).abs() / lambda.abs().max(f64::MIN_POSITIVE);
    let mut finite_difference = None;
    if let Some(dn) = delta_n {
        if !(dn > 0.0 && dn < n) {
            return Err(Error::invalid("δN must lie in (0, N)"));
        }
        let resolve = |particles: f64| {
            let mut p = result.problem.clone();
            p.particles = particles;
            solve(&p)
        };
        let plus = resolve(n + dn)?;
        let minus = resolve(n - dn)?;
        if plus.converged && minus.converged {
            finite_difference = Some((plus.energy() - minus.energy()) / (2.0 * dn));
        }
    }
    Ok(ChemicalPotentialReport {
        lambda,
        identity,
        identity_discrepancy,
        finite_difference,
        finite_difference_discrepancy: finite_difference
            .map(|fd| (fd - lambda).abs() / lambda.abs()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub particles: f64,
    pub scattering_length: f64,
    pub energy: f64,
    /// `N · E(1, Na)`.
    pub scaled_energy: f64,
    pub energy_mismatch: f64,
    /// `max_r |Φ_{N,a}(r)/√N − Φ_{1,Na}(r)|`.
    pub orbital_mismatch: f64,
}

/// Compares `E(N, a)` with `N · E(1, Na)` and `Φ_{N,a}` with `√N Φ_{1,Na}`.
pub fn verify_scaling(
    trap: &TrapPotential,
    particles: f64,
    a: f64,
    opts: &GpOptions,
) -> Result<ScalingReport> {
    let full = minimize(trap, particles, a, opts)?;
    let unit = minimize(trap, 1.0, particles * a, opts)?;
    for r in [&full, &unit] {
        if !r.converged {
            return Err(Error::NonConvergence(format!(
                "GP solve at N = {}, a = {} did not reach tolerance",
                r.particles(),
                r.scattering_length()
            )));
        }
    }
    let scaled_energy = particles * unit.energy();
    let root = particles.sqrt();
    let orbital_mismatch = full
        .orbital
        .values
        .iter()
        .zip(&unit.orbital.values)
        .map(|(x, y)| (x / root - y).abs())
        .fold(0.0, f64::max);
    Ok(ScalingReport {
        particles,
        scattering_length: a,
        energy: full.energy(),
        scaled_energy,
        energy_mismatch: (full.energy() - scaled_energy).abs() / full.energy().abs(),
        orbital_mismatch,
    })
}
