//! Homogeneous-gas quantities: gas parameter, leading-order energy,
//! Dyson's hard-sphere sandwich and the `Y^{1/17}` lower bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GasParameters {
    pub density: f64,
    pub scattering_length: f64,
    /// `Y = 4πρa³/3`.
    pub y: f64,
}

/// Constants of the homogeneous lower bounds. Their values are not known;
/// the defaults are illustrative only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c: f64,
    pub c_prime: f64,
    pub delta: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self {
            c: 1.0,
            c_prime: 1.0,
            delta: 0.1,
        }
    }
}

impl BoundConstants {
    pub const DEFAULT_LABEL: &'static str =
        "illustrative: numerical values of C, C', delta are not known";

    pub fn validate(&self) -> Result<()> {
        if [self.c, self.c_prime, self.delta]
            .iter()
            .all(|x| *x > 0.0 && x.is_finite())
        {
            Ok(())
        } else {
            Err(Error::invalid(
                "bound constants C, C', delta must be positive",
            ))
        }
    }
}

pub fn gas_parameter(density: f64, a: f64) -> Result<GasParameters> {
    if !(density >= 0.0 && a >= 0.0 && density.is_finite() && a.is_finite()) {
        return Err(Error::invalid(
            "density and scattering length must be nonnegative",
        ));
    }
    Ok(GasParameters {
        density,
        scattering_length: a,
        y: 4.0 * PI * density * a.powi(3) / 3.0,
    })
}

/// Leading low-density energy per particle, `4πρa`.
pub fn bogoliubov_leading(density: f64, a: f64) -> f64 {
    4.0 * PI * density * a
}

pub const DYSON_LOWER_RATIO: f64 = 0.070_710_678_118_654_75;

/// Dyson's bounds on `e₀/(4πρa)` for hard spheres; the upper ratio is
/// `None` for `Y ≥ 1`.
pub fn dyson_bounds(y: f64) -> (f64, Option<f64>) {
    let upper = if (0.0..1.0).contains(&y) {
        let t = y.cbrt();
        Some((1.0 + 2.0 * t) / ((1.0 - t) * (1.0 - t)))
    } else {
        None
    };
    (DYSON_LOWER_RATIO, upper)
}

/// `1 − C Y^{1/17}`.
pub fn thermo_ratio(y: f64, k: &BoundConstants) -> f64 {
    1.0 - k.c * y.powf(1.0 / 17.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermoBound {
    /// Energy per particle; may be negative.
    pub value: f64,
    pub ratio: f64,
    pub vacuous: bool,
}

/// `4πρa (1 − C Y^{1/17})`, returned unclamped.
pub fn lower_bound_thermo(gas: &GasParameters, k: &BoundConstants) -> ThermoBound {
    let ratio = thermo_ratio(gas.y, k);
    ThermoBound {
        value: bogoliubov_leading(gas.density, gas.scattering_length) * ratio,
        ratio,
        vacuous: ratio <= 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoxCondition {
    /// `Y < δ` fails.
    Dilute,
    /// `L/a > C′ Y^{−6/17}` fails.
    LargeBox,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxBound {
    pub y: f64,
    /// Bound on `E₀(n, L)/n`, present when both conditions hold.
    pub per_particle: Option<f64>,
    /// Bound on `E₀(n, L)` itself.
    pub total: Option<f64>,
    pub failed: Vec<BoxCondition>,
    pub vacuous: bool,
    pub constants: BoundConstants,
    /// Prefactor `μ` of the finite-box theorem, taken as 1 (`ħ = 2m = 1`).
    pub mu: f64,
}

/// Finite-box lower bound `E₀(n, L)/n ≥ 4πρa(1 − C Y^{1/17})`, valid for
/// `Y < δ` and `L/a > C′ Y^{−6/17}` with `ρ = n/L³`. At `a = 0` the size
/// condition is taken as vacuously true.
pub fn lower_bound_box(n: f64, l: f64, a: f64, k: &BoundConstants) -> Result<BoxBound> {
    if !(n >= 1.0 && l > 0.0 && a >= 0.0 && l.is_finite() && a.is_finite()) {
        return Err(Error::invalid("box bound needs n ≥ 1, L > 0, a ≥ 0"));
    }
    k.validate()?;
    let gas = gas_parameter(n / l.powi(3), a)?;
    let mut failed = Vec::new();
    if !(gas.y < k.delta) {
        failed.push(BoxCondition::Dilute);
    }
    if a > 0.0 && !(l / a > k.c_prime * gas.y.powf(-6.0 / 17.0)) {
        failed.push(BoxCondition::LargeBox);
    }
    let thermo = lower_bound_thermo(&gas, k);
    let ok = failed.is_empty();
    Ok(BoxBound {
        y: gas.y,
        per_particle: ok.then_some(thermo.value),
        total: ok.then_some(n * thermo.value),
        failed,
        vacuous: thermo.vacuous,
        constants: *k,
        mu: 1.0,
    })
}

/// `4πa n²/L³`.
pub fn box_energy_leading(n: f64, l: f64, a: f64) -> f64 {
    4.0 * PI * a * n * n / l.powi(3)
}

/// One row of the `Y` sweep table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub y: f64,
    pub dyson_lower: f64,
    pub dyson_upper: Option<f64>,
    pub thermo_ratio: f64,
}

/// `count` log-spaced values of `Y` between `lo` and `hi` inclusive.
pub fn sweep(lo: f64, hi: f64, count: usize, k: &BoundConstants) -> Result<Vec<SweepRow>> {
    if !(lo > 0.0 && hi >= lo && count >= 1) {
        return Err(Error::invalid(
            "sweep needs 0 < lo ≤ hi and at least one point",
        ));
    }
    let (l0, l1) = (lo.log10(), hi.log10());
    Ok((0..count)
        .map(|i| {
            let y = if count == 1 {
                lo
            } else if i + 1 == count {
                hi
            } else {
                10f64.powf(l0 + (l1 - l0) * i as f64 / (count - 1) as f64)
            };
            let (dyson_lower, dyson_upper) = dyson_bounds(y);
            SweepRow {
                y,
                dyson_lower,
                dyson_upper,
                thermo_ratio: thermo_ratio(y, k),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * y.abs()
    }

    #[test]
    fn gas_parameter_examples() {
        assert_eq!(gas_parameter(3.0 / (4.0 * PI), 1.0).unwrap().y, 1.0);
        assert_eq!(gas_parameter(2.0, 0.0).unwrap().y, 0.0);
        assert!(close(
            gas_parameter(1.0, 0.01).unwrap().y,
            4.188790204786391e-6,
            1e-14
        ));
        assert!(gas_parameter(-1.0, 0.1).is_err());
    }

    #[test]
    fn leading_and_box_leading() {
        assert_eq!(bogoliubov_leading(0.0, 3.0), 0.0);
        assert_eq!(bogoliubov_leading(1.0, 1.0), 4.0 * PI);
        assert_eq!(box_energy_leading(0.0, 10.0, 0.01), 0.0);
        assert!(close(
            box_energy_leading(10.0, 10.0, 0.01),
            0.012566370614359173,
            1e-14
        ));
        let (n, l, a) = (7.0, 3.0, 0.02);
        assert!(close(
            box_energy_leading(n, l, a),
            n * bogoliubov_leading(n / l.powi(3), a),
            1e-14
        ));
    }

    #[test]
    fn dyson_examples() {
        assert!(close(DYSON_LOWER_RATIO, 1.0 / (10.0 * 2f64.sqrt()), 1e-15));
        assert_eq!(dyson_bounds(0.0).1, Some(1.0));
        assert!(close(
            dyson_bounds(1e-6).1.unwrap(),
            1.0407101316192225,
            1e-12
        ));
        assert!(close(
            dyson_bounds(1e-3).1.unwrap(),
            1.4814814814814815,
            1e-12
        ));
        assert!(dyson_bounds(1.0).1.is_none());
    }

    #[test]
    fn thermo_examples() {
        let k = BoundConstants::default();
        let gas = gas_parameter(0.0, 1.0).unwrap();
        assert_eq!(lower_bound_thermo(&gas, &k).ratio, 1.0);
        let gas = gas_parameter(3.0 / (4.0 * PI), 1.0).unwrap();
        let b = lower_bound_thermo(&gas, &k);
        assert_eq!(b.value, 0.0);
        assert!(b.vacuous);
        assert!(close(thermo_ratio(1e-17, &k), 0.9, 1e-14));
        let big = BoundConstants { c: 5.0, ..k };
        let b = lower_bound_thermo(&gas_parameter(0.1, 1.0).unwrap(), &big);
        assert!(b.value < 0.0 && b.vacuous);
    }

    #[test]
    fn box_examples() {
        let k = BoundConstants::default();
        let free = lower_bound_box(5.0, 2.0, 0.0, &k).unwrap();
        assert_eq!(free.per_particle, Some(0.0));
        assert!(free.failed.is_empty());

        let dense = lower_bound_box(100.0, 1.0, 0.2, &k).unwrap();
        assert_eq!(dense.per_particle, None);
        assert!(dense.failed.contains(&BoxCondition::Dilute));

        let b = lower_bound_box(100.0, 100.0, 0.1, &k).unwrap();
        assert!(close(b.y, 4.188790204786391e-7, 1e-14));
        assert!(close(b.per_particle.unwrap(), 7.269265320711958e-5, 1e-12));
        assert_eq!(b.total, Some(100.0 * b.per_particle.unwrap()));
        let gas = gas_parameter(1e-4, 0.1).unwrap();
        assert_eq!(b.per_particle.unwrap(), lower_bound_thermo(&gas, &k).value);

        // with ρ = n/L³ the size condition reads L/a < (4πn/3)⁶, so a very
        // sparse box fails it while still being dilute
        let sparse = lower_bound_box(1.0, 1e4, 1.0, &k).unwrap();
        assert_eq!(sparse.failed, vec![BoxCondition::LargeBox]);
    }

    #[test]
    fn sweep_matches_reference() {
        let rows = sweep(1e-8, 1e-2, 7, &BoundConstants::default()).unwrap();
        let upper = [
            1.008650330162783893,
            1.0187181718314808127,
            1.0407101316192225283,
            1.0895293767639093178,
            1.2018085847046955041,
            1.4814814814814814815,
            2.3246460418146413484,
        ];
        let thermo = [
            0.66161448465717659175,
            0.61253248795438689713,
            0.55633126690213879943,
            0.49197819530869791244,
            0.41829086706256415503,
            0.33391537091908418625,
            0.23730141409765558359,
        ];
        for (i, row) in rows.iter().enumerate() {
            assert!(close(row.dyson_upper.unwrap(), upper[i], 1e-12), "row {i}");
            assert!(close(row.thermo_ratio, thermo[i], 1e-12), "row {i}");
        }
    }
}
