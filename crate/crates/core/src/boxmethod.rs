//! Cell-partition lower bound for the trapped gas.
//!
//! Space inside the Neumann ball of radius `R` is cut into cubes of side `L`.
//! In cell `α` the quadratic form is bounded below by
//!
//! ```text
//! Q_α ≥ (ρ_min/ρ_max) E₀(n_α, L) − 8πa ρ_max n_α,
//! ```
//!
//! and the bound on the many-body energy is
//! `E_R + 4πaρ̄_R N + inf_{n} Σ_α Q_α`.
//!
//! Cells are anchored at the origin, so they never straddle a coordinate
//! plane and halving `L` refines every cell. Only the first octant is
//! enumerated; each cell stands for eight.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::GpResult;
use crate::grid::Boundary;
use crate::homog::{lower_bound_box, BoundConstants};

/// Radial density on a uniform grid with `O(1)` range extrema.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    spacing: f64,
    values: Vec<f64>,
    min_table: Vec<Vec<f64>>,
    max_table: Vec<Vec<f64>>,
}

impl RadialProfile {
    pub fn new(spacing: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !(spacing > 0.0) {
            return Err(Error::invalid("radial profile needs two or more nodes"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("density must be finite and nonnegative"));
        }
        let mut min_table = vec![values.clone()];
        let mut max_table = vec![values.clone()];
        let mut width = 1;
        while 2 * width <= values.len() {
            let (lo, hi) = (min_table.last().unwrap(), max_table.last().unwrap());
            let n = values.len() + 1 - 2 * width;
            min_table.push((0..n).map(|i| lo[i].min(lo[i + width])).collect());
            max_table.push((0..n).map(|i| hi[i].max(hi[i + width])).collect());
            width *= 2;
        }
        Ok(Self {
            spacing,
            values,
            min_table,
            max_table,
        })
    }

    /// Density of a Neumann GP solve.
    pub fn from_gp(gp: &GpResult) -> Result<Self> {
        if gp.orbital.grid.boundary != Boundary::Neumann {
            return Err(Error::invalid(
                "the box method needs a Neumann (ball) GP solve",
            ));
        }
        if !gp.converged {
            return Err(Error::NonConvergence(
                "Neumann GP solve did not converge".into(),
            ));
        }
        Self::new(gp.orbital.grid.spacing, gp.orbital.density())
    }

    /// Constant density `rho` on a ball of radius `radius`.
    pub fn flat(rho: f64, radius: f64) -> Result<Self> {
        Self::new(radius, vec![rho, rho])
    }

    pub fn radius(&self) -> f64 {
        self.spacing * (self.values.len() - 1) as f64
    }

    /// Linear interpolation between nodes.
    pub fn at(&self, r: f64) -> f64 {
        let last = self.values.len() - 1;
        let x = (r / self.spacing).clamp(0.0, last as f64);
        let k = (x.floor() as usize).min(last - 1);
        let t = x - k as f64;
        self.values[k] + t * (self.values[k + 1] - self.values[k])
    }

    fn node_extrema(&self, lo: usize, hi: usize) -> (f64, f64) {
        let level = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
        let w = 1 << level;
        (
            self.min_table[level][lo].min(self.min_table[level][hi + 1 - w]),
            self.max_table[level][lo].max(self.max_table[level][hi + 1 - w]),
        )
    }

    /// `(min, max)` of the interpolated density over `[r0, r1]`.
    pub fn extrema(&self, r0: f64, r1: f64) -> (f64, f64) {
        let (a, b) = (self.at(r0), self.at(r1));
        let mut lo = a.min(b);
        let mut hi = a.max(b);
        let first = (r0 / self.spacing).ceil() as usize;
        let last = ((r1 / self.spacing).floor() as usize).min(self.values.len() - 1);
        if first <= last {
            let (m, n) = self.node_extrema(first, last);
            lo = lo.min(m);
            hi = hi.max(n);
        }
        (lo, hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub index: [u32; 3],
    pub multiplicity: u32,
    /// Distance from the origin to the nearest point of the cell.
    pub r_near: f64,
    pub r_far: f64,
    pub rho_min: f64,
    pub rho_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxPartition {
    pub radius: f64,
    pub side: f64,
    pub cells: Vec<Cell>,
}

impl BoxPartition {
    pub fn cell_count(&self) -> usize {
        self.cells.iter().map(|c| c.multiplicity as usize).sum()
    }

    /// `max_α (1 − ρ_min/ρ_max)`.
    pub fn density_variation(&self) -> f64 {
        self.cells
            .iter()
            .filter(|c| c.rho_max > 0.0)
            .map(|c| 1.0 - c.rho_min / c.rho_max)
            .fold(0.0, f64::max)
    }
}

/// Cubes of side `side` tiling the covering cube of the ball. Extrema run
/// over the radii of the part of each cube inside the ball; cubes wholly
/// outside take the boundary value.
pub fn partition(profile: &RadialProfile, side: f64) -> Result<BoxPartition> {
    let radius = profile.radius();
    if !(side > 0.0 && side <= 2.0 * radius) {
        return Err(Error::invalid("cell side must satisfy 0 < L ≤ 2R"));
    }
    let per_axis = (radius / side).ceil() as u32;
    let cells: Vec<Cell> = (0..per_axis)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in 0..per_axis {
                for k in 0..per_axis {
                    let near = side * ((i * i + j * j + k * k) as f64).sqrt();
                    let far =
                        side * (((i + 1).pow(2) + (j + 1).pow(2) + (k + 1).pow(2)) as f64).sqrt();
                    let (rho_min, rho_max) = profile.extrema(near.min(radius), far.min(radius));
                    out.push(Cell {
                        index: [i, j, k],
                        multiplicity: 8,
                        r_near: near,
                        r_far: far,
                        rho_min,
                        rho_max,
                    });
                }
            }
            out
        })
        .collect();
    Ok(BoxPartition {
        radius,
        side,
        cells,
    })
}

/// Source of the box energy `E₀(n, L)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyModel {
    /// Finite-box theorem where its conditions hold, `E₀ ≥ 0` elsewhere.
    Rigorous,
    /// `4πan²/L³`; illustrative, not a bound.
    LeadingOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerBoxBound {
    pub value: f64,
    /// The theorem's conditions held (always true for the leading-order model).
    pub theorem_applied: bool,
}

fn box_energy(n: f64, side: f64, a: f64, k: &BoundConstants, model: EnergyModel) -> (f64, bool) {
    match model {
        EnergyModel::LeadingOrder => (4.0 * PI * a * n * n / side.powi(3), true),
        EnergyModel::Rigorous => {
            if n < 1.0 {
                return (0.0, false);
            }
            match lower_bound_box(n, side, a, k) {
                Ok(b) => match b.total {
                    Some(t) => (t.max(0.0), true),
                    None => (0.0, false),
                },
                Err(_) => (0.0, false),
            }
        }
    }
}

/// `(ρ_min/ρ_max) E₀(n, L) − 8πa ρ_max n`.
pub fn per_box_bound(
    n: f64,
    cell: &Cell,
    side: f64,
    a: f64,
    k: &BoundConstants,
    model: EnergyModel,
) -> PerBoxBound {
    if n == 0.0 {
        return PerBoxBound {
            value: 0.0,
            theorem_applied: false,
        };
    }
    let (e0, applied) = box_energy(n, side, a, k, model);
    let ratio = if cell.rho_max > 0.0 {
        cell.rho_min / cell.rho_max
    } else {
        1.0
    };
    PerBoxBound {
        value: ratio * e0 - 8.0 * PI * a * cell.rho_max * n,
        theorem_applied: applied,
    }
}

/// Minimizes `g(n) − μn` over `n ∈ [0, cap]` exactly for both models.
/// Returns `(n*, value)`.
fn cell_minimum(
    cell: &Cell,
    side: f64,
    a: f64,
    cap: f64,
    mu: f64,
    k: &BoundConstants,
    model: EnergyModel,
) -> (f64, f64) {
    let ratio = if cell.rho_max > 0.0 {
        cell.rho_min / cell.rho_max
    } else {
        1.0
    };
    let slope = 8.0 * PI * a * cell.rho_max + mu;
    let l3 = side.powi(3);
    let alpha = ratio * 4.0 * PI * a / l3;
    if a == 0.0 || alpha == 0.0 {
        // g is linear: −slope · n
        return if slope > 0.0 {
            (cap, -slope * cap)
        } else {
            (0.0, 0.0)
        };
    }
    match model {
        EnergyModel::LeadingOrder => {
            let n = (slope / (2.0 * alpha)).clamp(0.0, cap);
            (n, alpha * n * n - slope * n)
        }
        EnergyModel::Rigorous => rigorous_minimum(alpha, slope, side, a, cap, k),
    }
}

/// The rigorous model is `E₀ = 0` outside the window `[lo, hi]` where the
/// theorem applies and is positive, and
/// `α n²(1 − C (κn)^{1/17})` inside (`κ = 4πa³/(3L³)`), which is convex then
/// concave in `n`; so the minimum sits at a window edge, at the cap, or at
/// the first stationary point.
fn rigorous_minimum(
    alpha: f64,
    slope: f64,
    side: f64,
    a: f64,
    cap: f64,
    k: &BoundConstants,
) -> (f64, f64) {
    let l3 = side.powi(3);
    let kappa = 4.0 * PI * a.powi(3) / (3.0 * l3);
    let n_of_y = |y: f64| y / kappa;
    // window: n ≥ 1, L/a > C′ Y^{−6/17}, Y < δ, 1 − C Y^{1/17} > 0
    let lo = 1f64.max(n_of_y((a * k.c_prime / side).powf(17.0 / 6.0)));
    let hi = n_of_y(k.delta).min(n_of_y(k.c.powf(-17.0))).min(cap);
    let linear = |n: f64| -slope * n;
    let smooth = |n: f64| alpha * n * n * (1.0 - k.c * (kappa * n).powf(1.0 / 17.0)) - slope * n;

    // Outside the window g is linear; its infimum there is at the largest
    // admissible n (the cap, or the window's lower edge if the window
    // reaches the cap).
    let window = lo < hi;
    let trivial_sup = if slope <= 0.0 {
        0.0
    } else if window && hi >= cap {
        lo
    } else {
        cap
    };
    let mut best = (trivial_sup, linear(trivial_sup));
    if !window {
        return best;
    }
    let mut consider = |n: f64, v: f64| {
        if v < best.1 {
            best = (n, v);
        }
    };
    consider(lo, smooth(lo));
    consider(hi, smooth(hi));
    // g'(n) = 2αn − αCκ^{1/17}(35/17) n^{18/17} − slope; g'' changes sign
    // once, at n_infl.
    let ck = k.c * kappa.powf(1.0 / 17.0);
    let d1 = |n: f64| 2.0 * alpha * n - alpha * ck * (35.0 / 17.0) * n.powf(18.0 / 17.0) - slope;
    let n_infl = (2.0 / (ck * (35.0 / 17.0) * (18.0 / 17.0))).powi(17);
    let (mut x0, mut x1) = (lo, hi.min(n_infl));
    if x0 < x1 && d1(x0) < 0.0 && d1(x1) > 0.0 {
        for _ in 0..200 {
            let m = 0.5 * (x0 + x1);
            if d1(m) < 0.0 {
                x0 = m;
            } else {
                x1 = m;
            }
        }
        consider(x0, smooth(x0));
        consider(x1, smooth(x1));
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OccupationResult {
    pub unconstrained_total: f64,
    /// Dual lower bound on the `Σn_α = N` problem; never below the
    /// unconstrained total.
    pub constrained_total: f64,
    pub multiplier: f64,
    /// Per enumerated cell (each standing for `multiplicity` cells).
    pub unconstrained_occupations: Vec<f64>,
    pub constrained_occupations: Vec<f64>,
    /// `Σ n_α` of the constrained occupations (`N` up to the multiplier
    /// resolution for the leading-order model).
    pub constrained_sum: f64,
}

fn dual(
    p: &BoxPartition,
    particles: f64,
    a: f64,
    mu: f64,
    k: &BoundConstants,
    model: EnergyModel,
) -> (f64, f64, Vec<f64>) {
    let parts: Vec<(f64, f64)> = p
        .cells
        .par_iter()
        .map(|c| cell_minimum(c, p.side, a, particles, mu, k, model))
        .collect();
    let mut value = mu * particles;
    let mut sum = 0.0;
    for (c, (n, v)) in p.cells.iter().zip(&parts) {
        value += c.multiplicity as f64 * v;
        sum += c.multiplicity as f64 * n;
    }
    (value, sum, parts.into_iter().map(|x| x.0).collect())
}

/// Each cell minimized on its own over `n ∈ [0, N]`: total and occupations.
pub fn unconstrained_minimum(
    p: &BoxPartition,
    particles: f64,
    a: f64,
    k: &BoundConstants,
    model: EnergyModel,
) -> (f64, Vec<f64>) {
    let (total, _, n) = dual(p, particles, a, 0.0, k, model);
    (total, n)
}

/// Unconstrained (each cell on its own, `n ∈ [0, N]`) and constrained
/// (`Σ n_α = N`, through the concave dual in the multiplier μ) minima of
/// `Σ_α Q_α` bounds.
pub fn minimize_occupations(
    p: &BoxPartition,
    particles: f64,
    a: f64,
    k: &BoundConstants,
    model: EnergyModel,
) -> OccupationResult {
    let (free, free_n) = unconstrained_minimum(p, particles, a, k, model);
    // The subgradient N − Σ n*(μ) is nonincreasing in μ.
    let scale = 8.0 * PI * a * p.cells.iter().map(|c| c.rho_max).fold(0.0, f64::max) + 1.0;
    let (mut lo, mut hi) = (-scale, scale);
    let mut best = free;
    let track = |mu: f64, best: &mut f64| {
        let (q, sum, _) = dual(p, particles, a, mu, k, model);
        *best = best.max(q);
        sum
    };
    while track(hi, &mut best) < particles {
        hi *= 2.0;
    }
    while track(lo, &mut best) > particles {
        lo *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if track(mid, &mut best) > particles {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * scale {
            break;
        }
    }
    // q is flat near its maximum, so the occupations come from the final
    // multiplier while the total keeps the largest dual value seen.
    let multiplier = 0.5 * (lo + hi);
    let (q, _, constrained_occupations) = dual(p, particles, a, multiplier, k, model);
    let constrained_total = best.max(q);
    let constrained_sum = p
        .cells
        .iter()
        .zip(&constrained_occupations)
        .map(|(c, n)| c.multiplicity as f64 * n)
        .sum();
    OccupationResult {
        unconstrained_total: free,
        constrained_total,
        multiplier,
        unconstrained_occupations: free_n,
        constrained_occupations,
        constrained_sum,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub particles: f64,
    pub scattering_length: f64,
    pub side: f64,
    pub radius: f64,
    pub model: EnergyModel,
    pub constants: BoundConstants,
    /// Theorem prefactor μ (1 in `ħ = 2m = 1` units).
    pub mu: f64,
    pub gp_box_energy: f64,
    pub mean_density: f64,
    pub cells: usize,
    /// Cells whose constrained occupation used the finite-box theorem.
    pub theorem_cells: usize,
    pub unconstrained_total: f64,
    pub constrained_total: f64,
    pub constrained_sum: f64,
    /// `E_R + 4πaρ̄_R N + constrained total`.
    pub bound: f64,
    /// Same with the unconstrained total.
    pub bound_unconstrained: f64,
    pub ratio: f64,
    pub density_variation: f64,
    /// `(4πa³N/(3L³))^{1/17}`.
    pub gas_parameter_proxy: f64,
}

pub fn assemble_lower_bound(
    gp_r: &GpResult,
    side: f64,
    k: &BoundConstants,
    model: EnergyModel,
) -> Result<LowerBoundReport> {
    k.validate()?;
    let profile = RadialProfile::from_gp(gp_r)?;
    let p = partition(&profile, side)?;
    let n = gp_r.particles();
    let a = gp_r.scattering_length();
    let occ = minimize_occupations(&p, n, a, k, model);
    let theorem_cells = p
        .cells
        .iter()
        .zip(&occ.constrained_occupations)
        .filter(|(c, n)| **n > 0.0 && per_box_bound(**n, c, side, a, k, model).theorem_applied)
        .map(|(c, _)| c.multiplicity as usize)
        .sum();
    let base = gp_r.energy() + 4.0 * PI * a * gp_r.mean_density * n;
    let bound = base + occ.constrained_total;
    Ok(LowerBoundReport {
        particles: n,
        scattering_length: a,
        side,
        radius: p.radius,
        model,
        constants: *k,
        mu: 1.0,
        gp_box_energy: gp_r.energy(),
        mean_density: gp_r.mean_density,
        cells: p.cell_count(),
        theorem_cells,
        unconstrained_total: occ.unconstrained_total,
        constrained_total: occ.constrained_total,
        constrained_sum: occ.constrained_sum,
        bound,
        bound_unconstrained: base + occ.unconstrained_total,
        ratio: bound / gp_r.energy(),
        density_variation: p.density_variation(),
        gas_parameter_proxy: (4.0 * PI * a.powi(3) * n / (3.0 * side.powi(3))).powf(1.0 / 17.0),
    })
}

/// `L* = c N^{−1/10}`.
pub fn optimal_side(particles: f64, c: f64) -> f64 {
    c * particles.powf(-0.1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<LowerBoundReport>,
    /// Side giving the largest (best) bound.
    pub best_side: f64,
    /// Density-variation proxy nondecreasing and gas-parameter proxy
    /// nonincreasing in `L`.
    pub opposite_trends: bool,
}

/// Bounds at `L = c N^{−1/10} 2^j`, `j = −levels..=levels`, sorted by `L`.
/// Sides above `2R` are skipped.
pub fn convergence_study(
    gp_r: &GpResult,
    k: &BoundConstants,
    model: EnergyModel,
    c: f64,
    levels: i32,
) -> Result<ConvergenceStudy> {
    let star = optimal_side(gp_r.particles(), c);
    let radius = gp_r.orbital.grid.r_out();
    let mut rows = Vec::new();
    for j in -levels..=levels {
        let side = star * 2f64.powi(j);
        if side <= 2.0 * radius {
            rows.push(assemble_lower_bound(gp_r, side, k, model)?);
        }
    }
    if rows.is_empty() {
        return Err(Error::invalid(
            "no cell side in the study fits inside the box",
        ));
    }
    let best_side = rows
        .iter()
        .max_by(|x, y| x.bound.total_cmp(&y.bound))
        .map(|r| r.side)
        .unwrap();
    let opposite_trends = rows.windows(2).all(|w| {
        w[1].density_variation >= w[0].density_variation
            && w[1].gas_parameter_proxy <= w[0].gas_parameter_proxy
    });
    Ok(ConvergenceStudy {
        rows,
        best_side,
        opposite_trends,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::{solve_in_box, GpOptions};
    use crate::potential::TrapPotential;

    fn flat_cell(rho: f64) -> Cell {
        Cell {
            index: [0, 0, 0],
            multiplicity: 1,
            r_near: 0.0,
            r_far: 1.0,
            rho_min: rho,
            rho_max: rho,
        }
    }

    #[test]
    fn profile_extrema_use_nodes_and_endpoints() {
        let p = RadialProfile::new(1.0, vec![1.0, 3.0, 2.0, 5.0, 0.5]).unwrap();
        assert_eq!(p.extrema(0.0, 4.0), (0.5, 5.0));
        assert_eq!(p.extrema(0.5, 1.5), (2.0, 3.0));
        assert_eq!(p.extrema(1.25, 1.75), (2.25, 2.75));
        assert_eq!(p.at(3.5), 2.75);
    }

    #[test]
    fn flat_profile_partition() {
        let p = RadialProfile::flat(0.3, 2.0).unwrap();
        let part = partition(&p, 0.5).unwrap();
        assert!(part
            .cells
            .iter()
            .all(|c| c.rho_min == 0.3 && c.rho_max == 0.3));
        assert_eq!(part.density_variation(), 0.0);
        let single = partition(&p, 4.0).unwrap();
        assert_eq!(single.cell_count(), 8);
    }

    #[test]
    fn per_box_examples() {
        let k = BoundConstants::default();
        let cell = flat_cell(0.2);
        let (a, side) = (0.01, 1.5);
        assert_eq!(
            per_box_bound(0.0, &cell, side, a, &k, EnergyModel::LeadingOrder).value,
            0.0
        );
        let n = 0.7;
        let v = per_box_bound(n, &cell, side, a, &k, EnergyModel::LeadingOrder).value;
        let expected = 4.0 * PI * a * n * n / side.powi(3) - 8.0 * PI * a * 0.2 * n;
        assert!((v - expected).abs() < 1e-15);
        let (n_star, min) = cell_minimum(&cell, side, a, 100.0, 0.0, &k, EnergyModel::LeadingOrder);
        assert!((n_star - 0.2 * side.powi(3)).abs() < 1e-12);
        assert!((min + 4.0 * PI * a * 0.04 * side.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn flat_unconstrained_total_is_minus_interaction() {
        let (rho, radius, side, a) = (0.05, 3.0, 0.25, 0.02);
        let p = partition(&RadialProfile::flat(rho, radius).unwrap(), side).unwrap();
        let occ = minimize_occupations(
            &p,
            1e6,
            a,
            &BoundConstants::default(),
            EnergyModel::LeadingOrder,
        );
        let exact = -4.0 * PI * a * rho * rho * side.powi(3) * p.cell_count() as f64;
        assert!((occ.unconstrained_total - exact).abs() <= 1e-10 * exact.abs());
    }

    #[test]
    fn zero_scattering_length_gives_zero_totals() {
        let p = partition(&RadialProfile::flat(0.05, 2.0).unwrap(), 0.5).unwrap();
        for model in [EnergyModel::LeadingOrder, EnergyModel::Rigorous] {
            let occ = minimize_occupations(&p, 10.0, 0.0, &BoundConstants::default(), model);
            assert_eq!(occ.unconstrained_total, 0.0);
            assert_eq!(occ.constrained_total, 0.0);
        }
    }

    #[test]
    fn constrained_total_dominates_unconstrained() {
        let gp = solve_in_box(
            &TrapPotential::harmonic(),
            4.0,
            16.0,
            1.0 / 16.0,
            &GpOptions {
                spacing: 1e-2,
                ..GpOptions::default()
            },
        )
        .unwrap();
        let p = partition(&RadialProfile::from_gp(&gp).unwrap(), 0.5).unwrap();
        for model in [EnergyModel::LeadingOrder, EnergyModel::Rigorous] {
            let occ = minimize_occupations(&p, 16.0, 1.0 / 16.0, &BoundConstants::default(), model);
            assert!(
                occ.unconstrained_total <= occ.constrained_total,
                "{model:?}"
            );
        }
        let lead = minimize_occupations(
            &p,
            16.0,
            1.0 / 16.0,
            &BoundConstants::default(),
            EnergyModel::LeadingOrder,
        );
        assert!((lead.constrained_sum - 16.0).abs() < 1e-6);
    }

    #[test]
    fn rigorous_minimum_matches_dense_scan() {
        let k = BoundConstants {
            c: 0.3,
            c_prime: 0.01,
            delta: 0.1,
        };
        let cell = Cell {
            rho_min: 0.8,
            rho_max: 1.0,
            ..flat_cell(1.0)
        };
        for (a, side, cap) in [(0.01, 2.0, 50.0), (0.05, 1.0, 400.0), (0.002, 3.0, 1e4)] {
            let (_, v) = cell_minimum(&cell, side, a, cap, 0.0, &k, EnergyModel::Rigorous);
            let scan = (0..=200_000)
                .map(|i| {
                    let n = cap * i as f64 / 200_000.0;
                    per_box_bound(n, &cell, side, a, &k, EnergyModel::Rigorous).value
                })
                .fold(f64::INFINITY, f64::min);
            assert!(v <= scan + 1e-12 * scan.abs(), "{a} {side}: {v} vs {scan}");
            assert!(v >= scan - 1e-3 * scan.abs(), "{a} {side}: {v} vs {scan}");
        }
    }

    #[test]
    fn halving_side_never_increases_density_variation() {
        let gp = solve_in_box(
            &TrapPotential::harmonic(),
            3.0,
            1.0,
            1.0,
            &GpOptions {
                spacing: 1e-2,
                ..GpOptions::default()
            },
        )
        .unwrap();
        let profile = RadialProfile::from_gp(&gp).unwrap();
        let mut last = f64::INFINITY;
        for side in [2.0, 1.0, 0.5, 0.25, 0.125] {
            let d = partition(&profile, side).unwrap().density_variation();
            assert!(d <= last);
            last = d;
        }
    }

    #[test]
    fn zero_interaction_bound_equals_box_energy() {
        let gp = solve_in_box(
            &TrapPotential::harmonic(),
            4.0,
            3.0,
            0.0,
            &GpOptions {
                spacing: 1e-2,
                ..GpOptions::default()
            },
        )
        .unwrap();
        for model in [EnergyModel::LeadingOrder, EnergyModel::Rigorous] {
            let r = assemble_lower_bound(&gp, 0.5, &BoundConstants::default(), model).unwrap();
            assert_eq!(r.bound, gp.energy());
        }
    }
}
