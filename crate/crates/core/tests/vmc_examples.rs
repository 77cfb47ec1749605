use std::f64::consts::PI;

use dilute_bose::gp::{minimize, GpOptions, GpResult};
use dilute_bose::vmc::*;
use dilute_bose::{PairPotential, TrapPotential};

fn gp(n: usize, na: f64) -> GpResult {
    minimize(
        &TrapPotential::harmonic(),
        n as f64,
        na / n as f64,
        &GpOptions::default(),
    )
    .unwrap()
}

/// Hard spheres of radius `a`, or `v ≡ 0` at `a = 0`.
fn pair(a: f64) -> PairPotential {
    if a == 0.0 {
        PairPotential::soft_sphere(0.0, 1.0).unwrap()
    } else {
        PairPotential::hard_sphere(a).unwrap()
    }
}

fn run(n: usize, na: f64, cfg: &VmcConfig) -> (GpResult, VmcRun) {
    let g = gp(n, na);
    let v = pair(na / n as f64);
    let trial = build_trial(&g, &v).unwrap();
    let r = metropolis_run(&trial, &v, &TrapPotential::harmonic(), cfg).unwrap();
    (g, r)
}

fn small() -> VmcConfig {
    VmcConfig {
        walkers: 2,
        burn_in: 500,
        sweeps: 5_000,
        ..VmcConfig::default()
    }
}

#[test]
fn free_gas_has_zero_variance() {
    for n in [1, 5] {
        let (g, r) = run(n, 0.0, &small());
        assert!((r.energy.mean - 3.0 * n as f64).abs() < 1e-9 * n as f64);
        assert!(r.energy.stderr < 1e-9);
        let report = upper_bound_check(&r.energy, &g);
        // E_GP carries its grid error; the sampled energy is exact
        assert!((report.ratio - 1.0).abs() <= report.ratio_stderr + GP_GRID_TOLERANCE);
    }
}

#[test]
fn two_hard_spheres_respect_the_free_floor() {
    let (_, r) = run(2, 0.1, &small());
    assert!(r.energy.mean + 3.0 * r.energy.stderr >= 6.0);
    assert!(r.min_pair_distance >= 0.05);
    assert!((0.2..=0.8).contains(&r.energy.acceptance));
}

#[test]
fn eight_hard_spheres_stay_within_ten_percent_of_gp() {
    let (g, r) = run(8, 0.1, &small());
    let report = upper_bound_check(&r.energy, &g);
    assert!(report.ratio <= 1.1 && report.ratio >= 0.9, "{report:?}");
    assert!(r.energy.mean + 3.0 * r.energy.stderr >= 24.0);
    assert!(r.min_pair_distance >= 0.1 / 8.0);
}

#[test]
fn fixed_seeds_are_bit_identical() {
    let (_, a) = run(4, 0.1, &small());
    let (_, b) = run(4, 0.1, &small());
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn different_streams_agree_statistically() {
    let (_, a) = run(4, 0.1, &small());
    let (_, b) = run(
        4,
        0.1,
        &VmcConfig {
            seed: 12345,
            ..small()
        },
    );
    let sigma = a.energy.stderr.hypot(b.energy.stderr);
    assert!((a.energy.mean - b.energy.mean).abs() <= 3.0 * sigma);
    assert_ne!(a.energy.mean, b.energy.mean);
}

#[test]
fn free_gas_histogram_matches_gaussian_density() {
    let reference = |r: f64| PI.powf(-1.5) * (-r * r).exp();
    let mut l1 = Vec::new();
    for sweeps in [2_000, 4_000, 8_000, 16_000] {
        let cfg = VmcConfig {
            walkers: 2,
            burn_in: 200,
            sweeps,
            histogram_radius: 3.0,
            histogram_bins: 30,
            ..VmcConfig::default()
        };
        let (_, r) = run(4, 0.0, &cfg);
        let cmp = compare_density(&density_histogram(&r.histogram), reference);
        if sweeps == 16_000 {
            assert!(cmp.max_abs_z <= 4.0, "{cmp:?}");
            assert!(cmp.chi2_per_dof <= 2.0, "{cmp:?}");
            assert!((r.r2.mean - 1.5).abs() <= 3.0 * r.r2.stderr);
        }
        l1.push(cmp.l1_discrepancy);
    }
    assert!(l1.windows(2).all(|w| w[1] < w[0]), "{l1:?}");
}

#[test]
fn decomposition_without_interaction_is_exact() {
    let g = gp(3, 0.0);
    let v = pair(0.0);
    let trial = build_trial(&g, &v).unwrap();
    let (report, _, _) =
        energy_decomposition_check(&trial, &g, &v, &TrapPotential::harmonic(), &small()).unwrap();
    assert!(report.lhs.mean.abs() < GP_GRID_TOLERANCE * g.energy());
    assert_eq!(report.quadratic_form.mean, 0.0);
    assert!(report.consistent);
}

#[test]
fn quadratic_form_without_pair_factor_is_minus_twice_the_mean_field() {
    let g = gp(4, 1.0);
    let q = quadratic_form_without_pair(&g);
    let expected = -8.0 * PI * g.scattering_length() * g.mean_density * g.particles();
    assert!((q - expected).abs() <= 1e-12 * expected.abs());
}

#[test]
fn decomposition_holds_for_four_hard_spheres() {
    let g = gp(4, 0.1);
    let v = PairPotential::hard_sphere(0.025).unwrap();
    let trial = build_trial(&g, &v).unwrap();
    let cfg = VmcConfig {
        walkers: 2,
        sweeps: 20_000,
        ..VmcConfig::default()
    };
    let (report, _, _) =
        energy_decomposition_check(&trial, &g, &v, &TrapPotential::harmonic(), &cfg).unwrap();
    assert!(report.sigmas <= 3.0, "{report:?}");
}

#[test]
fn adding_a_particle() {
    let (_, at3) = run(3, 0.0, &small());
    let (_, at4) = run(4, 0.0, &small());
    let est = chemical_potential_estimate(&at3.energy, &at4.energy, 3.0);
    assert!((est.difference - 3.0).abs() < 1e-9);

    // fixed a: the trial at N + 1 uses a = Na/N with the same length
    let a = 0.025;
    let cfg = VmcConfig {
        walkers: 2,
        sweeps: 10_000,
        ..VmcConfig::default()
    };
    let runs: Vec<(GpResult, VmcRun)> = [4usize, 5]
        .iter()
        .map(|&n| {
            let g = minimize(
                &TrapPotential::harmonic(),
                n as f64,
                a,
                &GpOptions::default(),
            )
            .unwrap();
            let v = PairPotential::hard_sphere(a).unwrap();
            let trial = build_trial(&g, &v).unwrap();
            (
                g.clone(),
                metropolis_run(&trial, &v, &TrapPotential::harmonic(), &cfg).unwrap(),
            )
        })
        .collect();
    let est = chemical_potential_estimate(
        &runs[0].1.energy,
        &runs[1].1.energy,
        runs[0].0.chemical_potential,
    );
    assert!(est.difference >= 3.0 - est.stderr, "{est:?}");
}

#[test]
fn mismatched_scattering_length_is_rejected() {
    let g = gp(4, 0.1);
    assert!(build_trial(&g, &PairPotential::hard_sphere(0.05).unwrap()).is_err());
}
