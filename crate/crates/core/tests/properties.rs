use proptest::prelude::*;

use dilute_bose::boxmethod::{minimize_occupations, partition, EnergyModel, RadialProfile};
use dilute_bose::gp::{minimize, GpOptions};
use dilute_bose::homog::{dyson_bounds, thermo_ratio, BoundConstants};
use dilute_bose::scattering::{build_pair_factor, rescale_pair, scatter, solve_zero_energy};
use dilute_bose::vmc::{log_trial, nearest_neighbor_distances, PairCache, TrialWavefunction};
use dilute_bose::{PairPotential, TrapPotential};

fn coarse() -> GpOptions {
    GpOptions {
        spacing: 1e-2,
        r_out: 8.0,
        ..GpOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gp_energy_is_monotone_in_a(n in 1.0f64..20.0, a1 in 0.0f64..0.1, da in 0.0f64..0.1) {
        let trap = TrapPotential::harmonic();
        let lo = minimize(&trap, n, a1, &coarse()).unwrap();
        let hi = minimize(&trap, n, a1 + da, &coarse()).unwrap();
        prop_assert!(hi.energy() >= lo.energy() - 1e-10 * lo.energy());
        for g in [&lo, &hi] {
            prop_assert!(g.chemical_potential >= g.energy() / n - 1e-10);
            prop_assert!(g.orbital.values.iter().all(|&v| v >= 0.0));
            let c = g.components;
            prop_assert!(c.kinetic >= 0.0 && c.trap >= 0.0 && c.interaction >= 0.0);
            prop_assert!((c.kinetic + c.trap + c.interaction - c.total).abs() <= 1e-12 * c.total);
        }
    }

    #[test]
    fn soft_sphere_length_lies_between_zero_and_range(height in 0.0f64..500.0, radius in 0.1f64..3.0) {
        let v = PairPotential::soft_sphere(height, radius).unwrap();
        let (_, a) = scatter(&v).unwrap();
        prop_assert!(a.value >= -a.error && a.value <= radius + a.error);
    }

    #[test]
    fn rescaling_hits_the_target(height in 1.0f64..200.0, log_ratio in -4.0f64..0.0) {
        let v1 = PairPotential::soft_sphere(height, 1.0).unwrap();
        let (_, a1) = scatter(&v1).unwrap();
        let target = a1.value * 10f64.powf(log_ratio);
        let v = rescale_pair(&v1, a1.value, target).unwrap();
        let (_, a) = scatter(&v).unwrap();
        prop_assert!((a.value - target).abs() <= 1e-8 * target);

        let hs = rescale_pair(&PairPotential::hard_sphere(1.0).unwrap(), 1.0, target).unwrap();
        prop_assert!((scatter(&hs).unwrap().1.value - target).abs() <= 1e-10 * target);
    }

    #[test]
    fn pair_factor_is_bounded_and_continuous(height in 1.0f64..200.0, rho in 1e-4f64..1e-2) {
        let v = PairPotential::soft_sphere(height, 1.0).unwrap();
        let sol = solve_zero_energy(&v, 40.0, 5e-4).unwrap();
        let f = build_pair_factor(&sol, rho).unwrap();
        prop_assert_eq!(f.value(f.b), 1.0);
        prop_assert!((f.value(f.b * (1.0 - 1e-9)) - 1.0).abs() < 1e-6);
        for k in 0..=400 {
            let r = f.b * k as f64 / 400.0;
            let x = f.value(r);
            prop_assert!((0.0..=1.0).contains(&x), "f({r}) = {x}");
        }
    }

    #[test]
    fn sandwich_window_is_nonempty_and_ordered(y1 in 1e-9f64..0.05, y2 in 1e-9f64..0.05) {
        let k = BoundConstants::default();
        let (lo, hi) = if y1 < y2 { (y1, y2) } else { (y2, y1) };
        prop_assume!(hi > lo);
        prop_assert!(thermo_ratio(lo, &k) <= 1.0);
        prop_assert!(dyson_bounds(lo).1.unwrap() >= 1.0);
        prop_assert!(dyson_bounds(hi).1.unwrap() > dyson_bounds(lo).1.unwrap());
        prop_assert!(thermo_ratio(hi, &k) < thermo_ratio(lo, &k));
    }

    #[test]
    fn relaxation_ordering(
        decay in 0.1f64..2.0,
        a in 1e-3f64..0.2,
        n in 1.0f64..50.0,
        side in 0.2f64..1.5,
        rigorous in any::<bool>(),
    ) {
        let values: Vec<f64> = (0..=300).map(|k| 0.1 * (-decay * (k as f64 * 0.01).powi(2)).exp()).collect();
        let profile = RadialProfile::new(0.01, values).unwrap();
        let p = partition(&profile, side).unwrap();
        let model = if rigorous { EnergyModel::Rigorous } else { EnergyModel::LeadingOrder };
        let k = BoundConstants { c: 0.2, c_prime: 0.01, delta: 0.3 };
        let occ = minimize_occupations(&p, n, a, &k, model);
        prop_assert!(occ.unconstrained_total <= occ.constrained_total);
        prop_assert!(occ.unconstrained_total <= 0.0);
    }

    #[test]
    fn halving_cells_never_widens_density_range(decay in 0.1f64..3.0, side in 0.3f64..3.0) {
        let values: Vec<f64> = (0..=300).map(|k| (-decay * (k as f64 * 0.01).powi(2)).exp()).collect();
        let profile = RadialProfile::new(0.01, values).unwrap();
        let coarse = partition(&profile, side).unwrap().density_variation();
        let fine = partition(&profile, side / 2.0).unwrap().density_variation();
        prop_assert!(fine <= coarse);
    }

    #[test]
    fn nearest_neighbour_distances_bound_every_pair(
        xs in prop::collection::vec(prop::array::uniform3(-2.0f64..2.0), 2..12)
    ) {
        let t = nearest_neighbor_distances(&xs);
        prop_assert!(t[0].is_infinite());
        for i in 1..xs.len() {
            for j in 0..i {
                let d = ((xs[i][0] - xs[j][0]).powi(2) + (xs[i][1] - xs[j][1]).powi(2) + (xs[i][2] - xs[j][2]).powi(2)).sqrt();
                prop_assert!(t[i] <= d);
            }
        }
    }
}

#[test]
fn overlapping_hard_cores_have_zero_amplitude() {
    let gp = minimize(&TrapPotential::harmonic(), 3.0, 0.05, &coarse()).unwrap();
    let v = PairPotential::hard_sphere(0.05).unwrap();
    let (sol, _) = scatter(&v).unwrap();
    let pair = build_pair_factor(&sol, gp.mean_density).unwrap();
    let trial = TrialWavefunction::from_gp(&gp, Some(pair)).unwrap();
    let xs = vec![[0.0, 0.0, 0.0], [0.03, 0.0, 0.0], [1.0, 0.0, 0.0]];
    assert_eq!(log_trial(&trial, &xs), f64::NEG_INFINITY);
    let clear = vec![[0.0, 0.0, 0.0], [0.3, 0.0, 0.0], [1.0, 0.0, 0.0]];
    assert!(log_trial(&trial, &clear).is_finite());
    let cache = PairCache::new(&trial, clear);
    assert!(cache.ln_f_total().is_finite());
}
