//! Pair and trap potentials.
//!
//! Lengths are in trap units and energies in trap units with ħ = 2m = 1.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tabulated, nonnegative radial pair potential with a power-law tail
/// `v(r) = v(r_last) (r_last / r)^p` beyond the last sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TabulatedPotential {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub tail_exponent: f64,
}

impl TabulatedPotential {
    pub fn new(radii: Vec<f64>, values: Vec<f64>, tail_exponent: f64) -> Result<Self> {
        let table = Self {
            radii,
            values,
            tail_exponent,
        };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        if !(self.tail_exponent > 3.0) {
            return Err(Error::TailTooSlow(self.tail_exponent));
        }
        if self.radii.len() < 2 || self.radii.len() != self.values.len() {
            return Err(Error::invalid(
                "tabulated potential needs at least two (radius, value) rows",
            ));
        }
        if self.radii[0] < 0.0 || self.radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "tabulated radii must be nonnegative and strictly increasing",
            ));
        }
        if self.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid(
                "pair potential values must be finite and nonnegative",
            ));
        }
        Ok(())
    }

    fn value(&self, r: f64) -> f64 {
        let n = self.radii.len();
        if r <= self.radii[0] {
            return self.values[0];
        }
        let last = self.radii[n - 1];
        if r >= last {
            return self.values[n - 1] * (last / r).powf(self.tail_exponent);
        }
        let k = self.radii.partition_point(|&x| x <= r) - 1;
        let (r0, r1) = (self.radii[k], self.radii[k + 1]);
        let s = (r - r0) / (r1 - r0);
        self.values[k] * (1.0 - s) + self.values[k + 1] * s
    }

    /// Reads the two-column text format.
    ///
    /// The first non-blank line must declare the tail exponent, e.g.
    /// `# tail_exponent = 6`; the remaining lines hold `radius, value`
    /// pairs separated by commas or whitespace. Further `#` lines are
    /// comments.
    pub fn read<R: Read>(mut reader: R) -> Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty potential table".into()))?;
        let tail_exponent = parse_header(header)?;

        let mut radii = Vec::new();
        let mut values = Vec::new();
        for (row, line) in lines.filter(|l| !l.starts_with('#')).enumerate() {
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            if fields.len() != 2 {
                return Err(Error::Parse(format!(
                    "data row {} has {} columns, expected 2",
                    row + 1,
                    fields.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("data row {}: {e}: {s:?}", row + 1)))
            };
            radii.push(parse(fields[0])?);
            values.push(parse(fields[1])?);
        }
        Self::new(radii, values, tail_exponent)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read(std::fs::File::open(path)?)
    }
}

fn parse_header(header: &str) -> Result<f64> {
    let body = header.trim_start_matches('#').trim();
    let (key, value) = body
        .split_once(['=', ':'])
        .ok_or_else(|| Error::Parse(format!("missing tail exponent header: {header:?}")))?;
    let key = key.trim().to_ascii_lowercase().replace('-', "_");
    if key != "tail_exponent" && key != "p" {
        return Err(Error::Parse(format!(
            "first line must declare `tail_exponent = p`, found {header:?}"
        )));
    }
    value
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("tail exponent: {e}")))
}

/// Spherically symmetric, nonnegative pair interaction `v(|x_i - x_j|)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PairPotential {
    /// Infinite wall for `r < radius`, zero outside.
    HardSphere {
        radius: f64,
    },
    /// `height` for `r < radius`, zero outside.
    SoftSphere {
        height: f64,
        radius: f64,
    },
    Tabulated(TabulatedPotential),
}

impl PairPotential {
    pub fn hard_sphere(radius: f64) -> Result<Self> {
        let v = PairPotential::HardSphere { radius };
        v.validate()?;
        Ok(v)
    }

    pub fn soft_sphere(height: f64, radius: f64) -> Result<Self> {
        let v = PairPotential::SoftSphere { height, radius };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PairPotential::HardSphere { radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::invalid("hard-sphere radius must be positive"));
                }
            }
            PairPotential::SoftSphere { height, radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::invalid("soft-sphere radius must be positive"));
                }
                if !(height.is_finite() && *height >= 0.0) {
                    return Err(Error::invalid(
                        "soft-sphere height must be finite and nonnegative",
                    ));
                }
            }
            PairPotential::Tabulated(t) => t.validate()?,
        }
        Ok(())
    }

    /// `v(r)`; `f64::INFINITY` inside a hard core.
    pub fn value(&self, r: f64) -> f64 {
        match self {
            PairPotential::HardSphere { radius } => {
                if r < *radius {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            PairPotential::SoftSphere { height, radius } => {
                if r < *radius {
                    *height
                } else {
                    0.0
                }
            }
            PairPotential::Tabulated(t) => t.value(r),
        }
    }

    pub fn core_radius(&self) -> Option<f64> {
        match self {
            PairPotential::HardSphere { radius } => Some(*radius),
            _ => None,
        }
    }

    /// Radius beyond which `v` vanishes identically, if it does.
    pub fn support(&self) -> Option<f64> {
        match self {
            PairPotential::HardSphere { radius } | PairPotential::SoftSphere { radius, .. } => {
                Some(*radius)
            }
            PairPotential::Tabulated(t) => {
                if t.values.last() == Some(&0.0) {
                    Some(*t.radii.last().unwrap())
                } else {
                    None
                }
            }
        }
    }

    /// Length scale of the interaction: the support radius, or the last
    /// tabulated radius for tailed tables.
    pub fn range(&self) -> f64 {
        match self {
            PairPotential::Tabulated(t) => *t.radii.last().unwrap(),
            _ => self.support().unwrap(),
        }
    }

    /// Radii where `v` jumps; integration grids are aligned to them.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            PairPotential::HardSphere { radius } | PairPotential::SoftSphere { radius, .. } => {
                vec![*radius]
            }
            PairPotential::Tabulated(_) => Vec::new(),
        }
    }

    pub fn tail_exponent(&self) -> Option<f64> {
        match self {
            PairPotential::Tabulated(t) if self.support().is_none() => Some(t.tail_exponent),
            _ => None,
        }
    }
}

/// Radial trap potential `V(x) = V(|x|)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrapPotential {
    /// `V(r) = stiffness * r^2`; stiffness 1 is the unit trap.
    Harmonic { stiffness: f64 },
    /// `V(r) = sum_k coefficients[k] * r^k`.
    Polynomial { coefficients: Vec<f64> },
    /// Piecewise-linear in `r`, continued linearly past the last sample.
    Tabulated { radii: Vec<f64>, values: Vec<f64> },
}

impl TrapPotential {
    pub fn harmonic() -> Self {
        TrapPotential::Harmonic { stiffness: 1.0 }
    }

    /// No external potential; only meaningful inside a Neumann box.
    pub fn flat() -> Self {
        TrapPotential::Polynomial {
            coefficients: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TrapPotential::Harmonic { stiffness } => {
                if !(stiffness.is_finite() && *stiffness > 0.0) {
                    return Err(Error::invalid("harmonic stiffness must be positive"));
                }
            }
            TrapPotential::Polynomial { coefficients } => {
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::invalid("polynomial coefficients must be finite"));
                }
            }
            TrapPotential::Tabulated { radii, values } => {
                if radii.len() < 2 || radii.len() != values.len() {
                    return Err(Error::invalid("tabulated trap needs at least two rows"));
                }
                if radii.windows(2).any(|w| !(w[1] > w[0])) || radii[0] != 0.0 {
                    return Err(Error::invalid(
                        "tabulated trap radii must start at 0 and increase strictly",
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("tabulated trap values must be finite"));
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            TrapPotential::Harmonic { stiffness } => stiffness * r * r,
            TrapPotential::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, c| acc * r + c)
            }
            TrapPotential::Tabulated { radii, values } => {
                let n = radii.len();
                let k = radii.partition_point(|&x| x <= r).clamp(1, n - 1) - 1;
                let s = (r - radii[k]) / (radii[k + 1] - radii[k]);
                values[k] * (1.0 - s) + values[k + 1] * s
            }
        }
    }
}
