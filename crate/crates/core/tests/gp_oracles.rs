use std::f64::consts::PI;

use dilute_bose::gp::{chemical_potential, minimize, solve_in_box, verify_scaling, GpOptions};
use dilute_bose::TrapPotential;

// Frozen from tools/oracles/gp_reference.py (fourth-order stencil,
// Richardson-extrapolated in the spacing).
const E_NA1: f64 = 3.622436077849;
const LAMBDA_NA1: f64 = 4.131276405374;
const RHO_NA1: f64 = 0.040492226685;
const E_NA01: f64 = 3.077121885134;
const LAMBDA_NA01: f64 = 3.151747919548;
const RHO_NA01: f64 = 0.059385511301;

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

#[test]
fn matches_reference_solver() {
    let trap = TrapPotential::harmonic();
    for (na, e, lambda, rho) in [
        (1.0, E_NA1, LAMBDA_NA1, RHO_NA1),
        (0.1, E_NA01, LAMBDA_NA01, RHO_NA01),
    ] {
        let gp = minimize(&trap, 1.0, na, &GpOptions::default()).unwrap();
        assert!(gp.converged);
        assert!(rel(gp.energy(), e) < 1e-6, "E({na}) = {}", gp.energy());
        assert!(
            rel(gp.chemical_potential, lambda) < 1e-6,
            "λ({na}) = {}",
            gp.chemical_potential
        );
        assert!(
            rel(gp.mean_density, rho) < 1e-6,
            "ρ̄({na}) = {}",
            gp.mean_density
        );
    }
}

#[test]
fn grid_halving_agrees_to_one_part_per_million() {
    let trap = TrapPotential::harmonic();
    let coarse = minimize(&trap, 1.0, 1.0, &GpOptions::default()).unwrap();
    let fine = minimize(
        &trap,
        1.0,
        1.0,
        &GpOptions {
            spacing: 5e-4,
            ..GpOptions::default()
        },
    )
    .unwrap();
    assert!(rel(coarse.energy(), fine.energy()) < 1e-6);
}

#[test]
fn free_gas_in_harmonic_trap() {
    let trap = TrapPotential::harmonic();
    let gp = minimize(&trap, 7.0, 0.0, &GpOptions::default()).unwrap();
    assert!(rel(gp.energy(), 21.0) < 1e-6);
    assert!(rel(gp.chemical_potential, 3.0) < 1e-6);
    assert!(rel(gp.mean_density, 7.0 * (2.0 * PI).powf(-1.5)) < 1e-6);
    assert!((7.0 * (2.0 * PI).powf(-1.5) / 7.0 - 0.063494).abs() < 1e-6);
}

#[test]
fn scaling_law_large_n() {
    let r = verify_scaling(
        &TrapPotential::harmonic(),
        100.0,
        0.01,
        &GpOptions::default(),
    )
    .unwrap();
    assert!(r.energy_mismatch < 1e-6, "{r:?}");
    assert!(r.orbital_mismatch < 1e-5, "{r:?}");
    assert!(rel(r.scaled_energy, 100.0 * E_NA1) < 1e-6);
}

#[test]
fn chemical_potential_checks() {
    let trap = TrapPotential::harmonic();
    let gp = minimize(&trap, 1.0, 1.0, &GpOptions::default()).unwrap();
    let report = chemical_potential(&gp, Some(1e-3)).unwrap();
    assert!(report.identity_discrepancy < 1e-8);
    assert!(report.finite_difference_discrepancy.unwrap() < 1e-4);
    assert!(report.lambda >= gp.energy());

    let free = minimize(&trap, 1.0, 0.0, &GpOptions::default()).unwrap();
    let report = chemical_potential(&free, None).unwrap();
    assert!((report.lambda - 3.0).abs() < 1e-6);
}

#[test]
fn neumann_ball_converges_to_whole_space() {
    let trap = TrapPotential::harmonic();
    let whole = minimize(&trap, 1.0, 1.0, &GpOptions::default()).unwrap();
    let energies: Vec<f64> = [4.0, 6.0, 8.0]
        .iter()
        .map(|&r| {
            solve_in_box(&trap, r, 1.0, 1.0, &GpOptions::default())
                .unwrap()
                .energy()
        })
        .collect();
    // Neumann walls lower the energy; enlarging the ball relaxes that.
    assert!(energies[0] <= energies[1] && energies[1] <= energies[2] + 1e-12);
    assert!(rel(energies[2], whole.energy()) < 1e-4);
}

#[test]
fn flat_ball_examples() {
    let flat = TrapPotential::flat();
    let radius: f64 = 2.0;
    let volume = 4.0 * PI * radius.powi(3) / 3.0;
    let free = solve_in_box(
        &flat,
        radius,
        5.0,
        0.0,
        &GpOptions {
            spacing: 1e-2,
            ..GpOptions::default()
        },
    )
    .unwrap();
    assert!(free.energy().abs() < 1e-10 && free.chemical_potential.abs() < 1e-10);
    // the quadrature volume differs from the exact one at O(h²)
    let gp = solve_in_box(&flat, radius, 5.0, 0.1, &GpOptions::default()).unwrap();
    assert!(rel(gp.energy(), 4.0 * PI * 0.1 * 25.0 / volume) < 1e-6);
    assert!(rel(gp.mean_density, 5.0 / volume) < 1e-6);
}
