//! Zero-energy two-body scattering.
//!
//! The relative-motion problem for two particles with `ħ = 2m = 1` is
//! `-u'' + v(r) u / 2 = 0` with `u(0) = 0`; the factor 1/2 comes from the
//! reduced mass. Outside the range of `v` the solution is linear,
//! `u ∝ r - a`, which defines the scattering length `a`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{PairPotential, TabulatedPotential};

/// Grid solution of the zero-energy scattering equation.
#[derive(Clone, Debug)]
pub struct ScatteringSolution {
    pub potential: PairPotential,
    /// Uniform node spacing; node `k` sits at `k * step`.
    pub step: f64,
    pub radii: Vec<f64>,
    /// `u₀` at the nodes (arbitrary normalization).
    pub u: Vec<f64>,
    /// `u₀'` at the nodes.
    pub du: Vec<f64>,
    /// Change of the far-field scattering length between the `2·step` and
    /// `step` integrations, divided by 15 (fourth-order Richardson estimate).
    pub step_error: f64,
}

/// Scattering length with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringLength {
    pub value: f64,
    pub error: f64,
}

/// Relative tolerance for the step-halving and tail-extrapolation checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Outer radius used when none is given: `max(10 R, 20 a_guess)` for compact
/// potentials and eighty times the table range for tailed ones, so that the
/// tail extrapolation has room for four radii.
pub fn default_r_max(v: &PairPotential) -> f64 {
    match v.tail_exponent() {
        Some(_) => 80.0 * v.range(),
        // a ≤ R for nonnegative compact potentials, so 20 a_guess ≤ 20 R.
        None => 20.0 * v.range(),
    }
}

pub fn default_step(v: &PairPotential) -> f64 {
    v.range() / 2000.0
}

/// Integrates `u'' = v u / 2` outward with classical fourth-order
/// Runge–Kutta. Grid nodes are aligned to the jumps of `v`; a hard core
/// is handled analytically (`u ≡ 0` inside, `u(R) = 0`, `u'(R) = 1`).
///
/// The integration is repeated with twice the step to produce
/// [`ScatteringSolution::step_error`].
pub fn solve_zero_energy(v: &PairPotential, r_max: f64, step: f64) -> Result<ScatteringSolution> {
    v.validate()?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid("integration step must be positive"));
    }
    if let Some(support) = v.support() {
        if r_max < support {
            return Err(Error::invalid(format!(
                "r_max = {r_max} lies inside the potential support {support}"
            )));
        }
    } else if r_max < 8.0 * v.range() {
        return Err(Error::invalid(format!(
            "r_max = {r_max} must be at least eight times the table range {} \
             for tail extrapolation",
            v.range()
        )));
    }

    // align the coarse step so that both passes put the jumps on nodes
    let step = 0.5 * aligned_step(v, 2.0 * step);
    let fine = integrate(v, r_max, step)?;
    let coarse = integrate(v, r_max, 2.0 * step)?;
    let a_fine = far_field_length(v, &fine.0, &fine.1, &fine.2);
    let a_coarse = far_field_length(v, &coarse.0, &coarse.1, &coarse.2);
    let step_error = (a_fine - a_coarse).abs() / 15.0;
    let tolerance = DEFAULT_TOLERANCE * v.range().max(a_fine.abs());
    if !step_error.is_finite() || step_error > tolerance {
        return Err(Error::NonConvergence(format!(
            "step halving changed the scattering length by {step_error:e} \
             (tolerance {tolerance:e}); reduce the step"
        )));
    }
    let (radii, u, du) = fine;
    Ok(ScatteringSolution {
        potential: v.clone(),
        step,
        radii,
        u,
        du,
        step_error,
    })
}

/// Largest step ≤ `step` that puts every jump of `v` on a node.
fn aligned_step(v: &PairPotential, step: f64) -> f64 {
    v.breakpoints()
        .into_iter()
        .fold(step, |h, b| b / (b / h * (1.0 - 1e-12)).ceil())
}

type Profile = (Vec<f64>, Vec<f64>, Vec<f64>);

fn integrate(v: &PairPotential, r_max: f64, h: f64) -> Result<Profile> {
    let n = (r_max / h).ceil() as usize + 1;
    if let PairPotential::HardSphere { radius } = v {
        let radii: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
        let u = radii.iter().map(|r| (r - radius).max(0.0)).collect();
        let du = radii
            .iter()
            .map(|r| if r >= radius { 1.0 } else { 0.0 })
            .collect();
        return Ok((radii, u, du));
    }
    let mut radii = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut du = Vec::with_capacity(n);

    let start = match v.core_radius() {
        Some(core) => (core / h).round() as usize,
        None => 0,
    };
    for k in 0..start {
        radii.push(k as f64 * h);
        u.push(0.0);
        du.push(0.0);
    }
    radii.push(start as f64 * h);
    u.push(0.0);
    du.push(1.0);

    // Evaluation points are pulled a hair inside the current interval so
    // that a jump sitting on a node is seen from the correct side.
    let eps = 1e-9 * h;
    let half = |r: f64, lo: f64, hi: f64| 0.5 * v.value(r.clamp(lo + eps, hi - eps));
    // Kahan compensation of the state update; long tails take ~1e5 steps.
    let (mut cy, mut cp) = (0.0, 0.0);
    for k in start..n - 1 {
        let r0 = k as f64 * h;
        let r1 = (k + 1) as f64 * h;
        let rm = r0 + 0.5 * h;
        let (y0, p0) = (u[k], du[k]);
        let (w0, wm, w1) = (half(r0, r0, r1), half(rm, r0, r1), half(r1, r0, r1));
        let k1 = (p0, w0 * y0);
        let k2 = (p0 + 0.5 * h * k1.1, wm * (y0 + 0.5 * h * k1.0));
        let k3 = (p0 + 0.5 * h * k2.1, wm * (y0 + 0.5 * h * k2.0));
        let k4 = (p0 + h * k3.1, w1 * (y0 + h * k3.0));
        let (y1, c) = kahan(y0, h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0), cy);
        cy = c;
        let (p1, c) = kahan(p0, h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1), cp);
        cp = c;
        radii.push(r1);
        u.push(y1);
        du.push(p1);
        // The equation is linear: rescale the history before overflow.
        if y1.abs() > 1e150 {
            let s = 1e-150;
            u.iter_mut().for_each(|x| *x *= s);
            du.iter_mut().for_each(|x| *x *= s);
            cy *= s;
            cp *= s;
        }
    }
    if u.iter().chain(&du).any(|x| !x.is_finite()) {
        return Err(Error::NonConvergence(
            "zero-energy integration produced non-finite values".into(),
        ));
    }
    Ok((radii, u, du))
}

/// `sum + increment` with running compensation `c`.
fn kahan(sum: f64, increment: f64, c: f64) -> (f64, f64) {
    let y = increment - c;
    let t = sum + y;
    (t, (t - sum) - y)
}

/// `r - u/u'` at the first node past the support (compact potentials,
/// where the value is already exact) or at the last node.
fn far_field_length(v: &PairPotential, radii: &[f64], u: &[f64], du: &[f64]) -> f64 {
    let k = far_node(v, radii);
    radii[k] - u[k] / du[k]
}

fn far_node(v: &PairPotential, radii: &[f64]) -> usize {
    let last = radii.len() - 1;
    match v.support() {
        Some(s) => radii.partition_point(|&r| r < s).min(last),
        None => last,
    }
}

impl ScatteringSolution {
    pub fn r_max(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    /// `r - u(r)/u'(r)` at node `k`.
    fn length_at(&self, k: usize) -> f64 {
        self.radii[k] - self.u[k] / self.du[k]
    }

    fn node_near(&self, r: f64) -> usize {
        ((r / self.step).round() as usize).min(self.radii.len() - 1)
    }

    /// `f₀(r) = u₀(r)/r` on the nodes, with `f₀(0) = u₀'(0)`.
    pub fn f0(&self) -> Vec<f64> {
        self.radii
            .iter()
            .zip(&self.u)
            .zip(&self.du)
            .map(|((&r, &u), &du)| if r == 0.0 { du } else { u / r })
            .collect()
    }

    /// Cubic Hermite interpolation of `u₀`, continued linearly past the
    /// last node (exact for compactly supported potentials).
    pub fn u_at(&self, r: f64) -> f64 {
        hermite(&self.u, &self.du, self.step, r)
    }
}

fn hermite(u: &[f64], du: &[f64], h: f64, r: f64) -> f64 {
    let last = u.len() - 1;
    let x = r / h;
    if x >= last as f64 {
        return u[last] + du[last] * (r - last as f64 * h);
    }
    let k = x.floor() as usize;
    let t = x - k as f64;
    let (t2, t3) = (t * t, t * t * t);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * u[k] + h10 * h * du[k] + h01 * u[k + 1] + h11 * h * du[k + 1]
}

/// Scattering length `a = lim (r - u₀/u₀')`.
///
/// For compactly supported potentials the limit is attained at every node
/// past the support. For power-law tails `v ~ r^-p` the finite-radius value
/// approaches the limit as `r^-(p-3)`; the values at `r_max/8`, `r_max/4`,
/// `r_max/2` and `r_max` are fitted with the two leading tail powers, and
/// the spread between the inner and outer three-point fits is the tail
/// error.
pub fn scattering_length(sol: &ScatteringSolution) -> Result<ScatteringLength> {
    let last = sol.radii.len() - 1;
    if !(sol.du[last] > 0.0) {
        return Err(Error::invalid("u₀' must be positive at r_max"));
    }
    let floor = 4.0 * f64::EPSILON * sol.r_max();
    let v = &sol.potential;
    let Some(p) = v.tail_exponent() else {
        let k = far_node(v, &sol.radii);
        return Ok(ScatteringLength {
            value: sol.length_at(k),
            error: sol.step_error + floor,
        });
    };

    let q = p - 3.0;
    let r_max = sol.r_max();
    let ks = [
        sol.node_near(r_max / 8.0),
        sol.node_near(r_max / 4.0),
        sol.node_near(r_max / 2.0),
        last,
    ];
    // a(r) = a∞ + c₁ r^{-q} + c₂ r^{-q-1} through three consecutive radii
    let extrapolate = |nodes: &[usize]| {
        let rows: Vec<[f64; 4]> = nodes
            .iter()
            .map(|&k| {
                let r = sol.radii[k];
                let w = r.powf(-q);
                [1.0, w, w / r, sol.length_at(k)]
            })
            .collect();
        solve3(&rows)[0]
    };
    let near = extrapolate(&ks[..3]);
    let far = extrapolate(&ks[1..]);
    let error = (far - near).abs() + sol.step_error + floor;
    let tolerance = DEFAULT_TOLERANCE.sqrt() * v.range().max(far.abs());
    if !error.is_finite() || error > tolerance {
        return Err(Error::NonConvergence(format!(
            "tail extrapolation did not converge for p = {p}: \
             estimated error {error:e} exceeds {tolerance:e}"
        )));
    }
    Ok(ScatteringLength { value: far, error })
}

/// Gaussian elimination with partial pivoting on an augmented 3×4 system.
fn solve3(rows: &[[f64; 4]]) -> [f64; 3] {
    let mut m = [rows[0], rows[1], rows[2]];
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for c in col..4 {
                m[row][c] -= f * m[col][c];
            }
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|c| m[row][c] * x[c]).sum();
        x[row] = (m[row][3] - tail) / m[row][row];
    }
    x
}

/// Solves with default grid settings and returns the solution and `a`.
pub fn scatter(v: &PairPotential) -> Result<(ScatteringSolution, ScatteringLength)> {
    let sol = solve_zero_energy(v, default_r_max(v), default_step(v))?;
    let a = scattering_length(&sol)?;
    Ok((sol, a))
}

/// Member of the family `v(r) = (a₁/a)² v₁(a₁ r / a)`, which has
/// scattering length `a` when `v₁` has scattering length `a₁`.
pub fn rescale_pair(v1: &PairPotential, a1: f64, a: f64) -> Result<PairPotential> {
    if !(a > 0.0 && a1 > 0.0 && a.is_finite() && a1.is_finite()) {
        return Err(Error::invalid("scattering lengths must be positive"));
    }
    v1.validate()?;
    let s = a / a1;
    let scaled = match v1 {
        PairPotential::HardSphere { radius } => PairPotential::HardSphere { radius: radius * s },
        PairPotential::SoftSphere { height, radius } => PairPotential::SoftSphere {
            height: height / (s * s),
            radius: radius * s,
        },
        PairPotential::Tabulated(t) => PairPotential::Tabulated(TabulatedPotential {
            radii: t.radii.iter().map(|r| r * s).collect(),
            values: t.values.iter().map(|v| v / (s * s)).collect(),
            tail_exponent: t.tail_exponent,
        }),
    };
    Ok(scaled)
}

/// Nearest-neighbour pair factor `f(r) = f₀(r)/f₀(b)` for `r < b` and
/// `f = 1` beyond, with cutoff `b = (4π ρ̄/3)^{-1/3}`.
#[derive(Clone, Debug)]
pub struct PairFactor {
    pub a: f64,
    pub b: f64,
    shape: Shape,
}

#[derive(Clone, Debug)]
enum Shape {
    /// `f₀ = 1 - a/r`, exact for hard spheres.
    HardCore,
    Sampled {
        step: f64,
        u: Vec<f64>,
        du: Vec<f64>,
        f0_b: f64,
    },
}

/// Cutoff radius `b = (4π ρ̄ / 3)^{-1/3}`.
pub fn pair_cutoff(mean_density: f64) -> f64 {
    (4.0 * std::f64::consts::PI * mean_density / 3.0).powf(-1.0 / 3.0)
}

pub fn build_pair_factor(sol: &ScatteringSolution, mean_density: f64) -> Result<PairFactor> {
    if !(mean_density > 0.0 && mean_density.is_finite()) {
        return Err(Error::invalid("mean density must be positive"));
    }
    let a = scattering_length(sol)?.value;
    let b = pair_cutoff(mean_density);
    if b <= a {
        return Err(Error::NotDilute { a, b });
    }
    let shape = match sol.potential {
        PairPotential::HardSphere { .. } => Shape::HardCore,
        _ => {
            let f0_b = sol.u_at(b) / b;
            Shape::Sampled {
                step: sol.step,
                u: sol.u.clone(),
                du: sol.du.clone(),
                f0_b,
            }
        }
    };
    Ok(PairFactor { a, b, shape })
}

impl PairFactor {
    pub fn value(&self, r: f64) -> f64 {
        if r >= self.b {
            return 1.0;
        }
        match &self.shape {
            Shape::HardCore => {
                if r <= self.a {
                    0.0
                } else {
                    (1.0 - self.a / r) / (1.0 - self.a / self.b)
                }
            }
            Shape::Sampled { step, u, du, f0_b } => {
                let f0 = if r > 0.0 {
                    hermite(u, du, *step, r) / r
                } else {
                    du[0]
                };
                // f0 increases on [0, b]; the clamp only removes rounding
                (f0 / f0_b).min(1.0)
            }
        }
    }

    /// `ln f(r)`, `-∞` inside a hard core.
    pub fn ln_value(&self, r: f64) -> f64 {
        if r >= self.b {
            return 0.0;
        }
        match &self.shape {
            Shape::HardCore => {
                if r <= self.a {
                    f64::NEG_INFINITY
                } else {
                    ((r - self.a) / r).ln() - (1.0 - self.a / self.b).ln()
                }
            }
            Shape::Sampled { .. } => self.value(r).ln(),
        }
    }

    /// Radius inside which `f` vanishes.
    pub fn core_radius(&self) -> Option<f64> {
        match self.shape {
            Shape::HardCore => Some(self.a),
            Shape::Sampled { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn soft_sphere_closed_form(height: f64, radius: f64) -> f64 {
        let kappa = (height / 2.0).sqrt();
        radius - (kappa * radius).tanh() / kappa
    }

    #[test]
    fn hard_sphere_solution_is_linear_outside_core() {
        let v = PairPotential::hard_sphere(1.0).unwrap();
        let sol = solve_zero_energy(&v, 10.0, 1e-3).unwrap();
        assert_eq!(sol.u[0], 0.0);
        for (r, u) in sol.radii.iter().zip(&sol.u) {
            let exact = (r - 1.0).max(0.0);
            assert!((u - exact).abs() < 1e-12, "r = {r}: {u} vs {exact}");
        }
        let a = scattering_length(&sol).unwrap();
        assert!((a.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn free_solution_is_proportional_to_r() {
        let v = PairPotential::soft_sphere(0.0, 1.0).unwrap();
        let sol = solve_zero_energy(&v, 5.0, 1e-3).unwrap();
        for (r, u) in sol.radii.iter().zip(&sol.u) {
            assert!((u - r).abs() < 1e-12);
        }
        assert!(scattering_length(&sol).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn soft_sphere_profile_matches_sinh_inside_and_line_outside() {
        let (height, radius) = (100.0, 1.0);
        let kappa = (height / 2.0f64).sqrt();
        let v = PairPotential::soft_sphere(height, radius).unwrap();
        let sol = solve_zero_energy(&v, 10.0, 5e-4).unwrap();
        let a = soft_sphere_closed_form(height, radius);
        let slope = (kappa * radius).cosh();
        for (r, u) in sol.radii.iter().zip(&sol.u) {
            let exact = if *r <= radius {
                (kappa * r).sinh() / kappa
            } else {
                slope * (r - a)
            };
            assert!((u - exact).abs() <= 1e-9 * exact.abs().max(1.0), "r = {r}");
        }
    }

    #[test]
    fn soft_sphere_length_matches_closed_form() {
        // closed forms evaluated at 50 digits (tools/oracles/soft_sphere_reference.py)
        let cases = [
            (100.0, 1.0, 0.858_578_847_792_308_5),
            (1.0, 1.0, 0.138_942_828_419_452_36),
            (10.0, 0.5, 0.139_150_510_795_940_08),
            (1000.0, 2.0, 1.955_278_640_450_004_2),
        ];
        for (height, radius, expected) in cases {
            let v = PairPotential::soft_sphere(height, radius).unwrap();
            let (_, a) = scatter(&v).unwrap();
            assert!(
                (a.value - expected).abs() < 1e-8,
                "{height} {radius}: {}",
                a.value
            );
            assert!((soft_sphere_closed_form(height, radius) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn doubling_r_max_is_within_reported_error() {
        for v in [
            PairPotential::hard_sphere(0.3).unwrap(),
            PairPotential::soft_sphere(100.0, 1.0).unwrap(),
        ] {
            let r_max = default_r_max(&v);
            let step = default_step(&v);
            let a1 = scattering_length(&solve_zero_energy(&v, r_max, step).unwrap()).unwrap();
            let a2 = scattering_length(&solve_zero_energy(&v, 2.0 * r_max, step).unwrap()).unwrap();
            assert!((a1.value - a2.value).abs() < a1.error);
        }
    }

    #[test]
    fn tailed_table_extrapolates() {
        // v = 10 for r < 0.5, then 10 (0.5/r)^6 beyond: compare against a
        // very long direct integration, whose residual tail error is
        // O(r^-3) ≈ 3e-11.
        let radii: Vec<f64> = (0..=50).map(|k| k as f64 * 0.01).collect();
        let values = vec![10.0; radii.len()];
        let table = TabulatedPotential::new(radii, values, 6.0).unwrap();
        let v = PairPotential::Tabulated(table);
        let (sol, a) = scatter(&v).unwrap();
        let long = solve_zero_energy(&v, 1000.0, 1e-3).unwrap();
        let direct = long.length_at(long.radii.len() - 1);
        assert!((a.value - direct).abs() < 1e-7, "{} vs {direct}", a.value);
        assert!((a.value - direct).abs() <= a.error.max(1e-7));
        let doubled = solve_zero_energy(&v, 2.0 * sol.r_max(), sol.step).unwrap();
        let a2 = scattering_length(&doubled).unwrap();
        assert!((a.value - a2.value).abs() < a.error);
    }

    #[test]
    fn rejects_bad_grids() {
        let v = PairPotential::soft_sphere(1.0, 2.0).unwrap();
        assert!(solve_zero_energy(&v, 1.0, 1e-3).is_err());
        assert!(solve_zero_energy(&v, 10.0, 0.0).is_err());
    }

    #[test]
    fn rescaling_hits_target_length() {
        let hs = PairPotential::hard_sphere(1.0).unwrap();
        assert_eq!(rescale_pair(&hs, 1.0, 1.0).unwrap(), hs);
        let small = rescale_pair(&hs, 1.0, 0.01).unwrap();
        assert_eq!(small, PairPotential::HardSphere { radius: 0.01 });
        assert!((scatter(&small).unwrap().1.value - 0.01).abs() < 1e-14);

        let soft = PairPotential::soft_sphere(100.0, 1.0).unwrap();
        let a1 = scatter(&soft).unwrap().1.value;
        for ratio in [1.0, 0.5, 1e-2, 1e-4] {
            let target = a1 * ratio;
            let v = rescale_pair(&soft, a1, target).unwrap();
            let a = scatter(&v).unwrap().1.value;
            assert!(
                (a - target).abs() < 1e-8 * target,
                "ratio {ratio}: {a} vs {target}"
            );
        }
        assert!(rescale_pair(&soft, a1, 0.0).is_err());
    }

    #[test]
    fn pair_cutoff_inverts_density() {
        let rho = 3.0 / (4.0 * std::f64::consts::PI);
        assert!((pair_cutoff(rho) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hard_sphere_pair_factor_closed_form() {
        let v = PairPotential::hard_sphere(0.1).unwrap();
        let (sol, _) = scatter(&v).unwrap();
        let f = build_pair_factor(&sol, 3.0 / (4.0 * std::f64::consts::PI)).unwrap();
        assert!((f.b - 1.0).abs() < 1e-15);
        assert!((f.value(0.5) - 8.0 / 9.0).abs() < 1e-14);
        assert_eq!(f.value(0.05), 0.0);
        assert_eq!(f.ln_value(0.1), f64::NEG_INFINITY);
        assert_eq!(f.value(f.b), 1.0);
        assert_eq!(f.value(3.0), 1.0);
    }

    #[test]
    fn soft_sphere_pair_factor_is_continuous_and_bounded() {
        let v = PairPotential::soft_sphere(100.0, 1.0).unwrap();
        let (sol, a) = scatter(&v).unwrap();
        let rho = 0.01;
        let f = build_pair_factor(&sol, rho).unwrap();
        assert!((f.a - a.value).abs() < 1e-15);
        assert!((f.value(f.b * (1.0 - 1e-12)) - 1.0).abs() < 1e-9);
        let mut prev = 0.0;
        for k in 0..=2000 {
            let r = f.b * k as f64 / 2000.0;
            let x = f.value(r);
            assert!((0.0..=1.0 + 1e-12).contains(&x), "f({r}) = {x}");
            assert!(x >= prev - 1e-12, "f not monotone at {r}");
            prev = x;
        }
        // matches the node samples of u₀/r
        let f0 = sol.f0();
        let f0_b = sol.u_at(f.b) / f.b;
        for k in (0..sol.radii.len()).step_by(97) {
            if sol.radii[k] < f.b {
                assert!((f.value(sol.radii[k]) - f0[k] / f0_b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn refuses_dense_gas() {
        let v = PairPotential::hard_sphere(2.0).unwrap();
        let (sol, _) = scatter(&v).unwrap();
        assert!(matches!(
            build_pair_factor(&sol, 3.0 / (4.0 * std::f64::consts::PI)),
            Err(Error::NotDilute { .. })
        ));
    }

    #[test]
    fn solutions_are_nondecreasing_with_nonnegative_length() {
        for v in [
            PairPotential::hard_sphere(0.7).unwrap(),
            PairPotential::soft_sphere(3.0, 1.5).unwrap(),
            PairPotential::soft_sphere(1e4, 0.2).unwrap(),
        ] {
            let (sol, a) = scatter(&v).unwrap();
            assert!(sol.u.windows(2).all(|w| w[1] >= w[0]));
            assert!(a.value >= 0.0 && a.value <= v.range() + 1e-12);
            // linear (hence concave) outside the support
            let support = v.support().unwrap();
            for k in 1..sol.radii.len() - 1 {
                if sol.radii[k - 1] > support {
                    let curv = sol.u[k + 1] - 2.0 * sol.u[k] + sol.u[k - 1];
                    assert!(curv.abs() <= 1e-9 * sol.u[k].abs().max(1.0));
                }
            }
        }
    }
}
