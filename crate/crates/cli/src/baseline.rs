//! Comparison of a fresh `results.json` against a committed baseline.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;

/// Relative tolerance for numeric leaves of deterministic pipelines.
pub const DETERMINISTIC_TOLERANCE: f64 = 1e-9;

/// VMC energies must agree within this many combined standard errors.
pub const VMC_SIGMAS: f64 = 3.0;

/// Implied constants may exceed the baseline maximum by this factor.
pub const CONSTANT_FACTOR: f64 = 1.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub checks: Vec<BaselineCheck>,
    pub passed: bool,
}

impl BaselineReport {
    fn new(checks: Vec<BaselineCheck>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self { checks, passed }
    }
}

fn check(name: &str, passed: bool, detail: String) -> BaselineCheck {
    BaselineCheck {
        name: name.into(),
        passed,
        detail,
    }
}

/// Largest `|implied constant|` recorded in a sweep baseline.
pub fn max_implied_constant(baseline: &Value) -> Option<f64> {
    baseline
        .pointer("/trend/max_abs_implied_constant")
        .and_then(Value::as_f64)
}

/// Paths of numeric leaves that differ by more than `tol` relative, and of
/// other leaves that differ at all.
pub fn numeric_mismatches(fresh: &Value, baseline: &Value, tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    walk(fresh, baseline, tol, String::new(), &mut out);
    out
}

fn walk(x: &Value, y: &Value, tol: f64, path: String, out: &mut Vec<String>) {
    match (x, y) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            if a != b && (a - b).abs() > tol * a.abs().max(b.abs()) {
                out.push(format!("{path}: {a} vs {b}"));
            }
        }
        (Value::Object(a), Value::Object(b)) => {
            for (k, va) in a {
                match b.get(k) {
                    Some(vb) => walk(va, vb, tol, format!("{path}/{k}"), out),
                    None => out.push(format!("{path}/{k}: missing from baseline")),
                }
            }
            for k in b.keys().filter(|k| !a.contains_key(*k)) {
                out.push(format!("{path}/{k}: missing from results"));
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (i, (va, vb)) in a.iter().zip(b).enumerate() {
                walk(va, vb, tol, format!("{path}/{i}"), out);
            }
        }
        _ if x == y => {}
        _ => out.push(format!("{path}: {x} vs {y}")),
    }
}

fn number(v: &Value, pointer: &str) -> Option<f64> {
    v.pointer(pointer).and_then(Value::as_f64)
}

fn vmc_checks(fresh: &Value, baseline: &Value) -> Vec<BaselineCheck> {
    let get = |v: &Value| {
        Some((
            number(v, "/run/energy/mean")?,
            number(v, "/run/energy/stderr")?,
        ))
    };
    match (get(fresh), get(baseline)) {
        (Some((m, s)), Some((mb, sb))) => {
            let sigma = s.hypot(sb);
            let gap = (m - mb).abs();
            vec![check(
                "energy",
                gap <= VMC_SIGMAS * sigma,
                format!("|{m} − {mb}| = {gap:e} against {VMC_SIGMAS} × {sigma:e}"),
            )]
        }
        _ => vec![check("energy", false, "energy estimate missing".into())],
    }
}

fn sweep_checks(fresh: &Value, baseline: &Value) -> Vec<BaselineCheck> {
    let mut checks = Vec::new();
    let limit = max_implied_constant(baseline);
    let within = fresh
        .pointer("/trend/within_baseline")
        .and_then(Value::as_bool);
    checks.push(check(
        "implied-constant",
        within == Some(true),
        format!("every |implied constant| − 3σ within {CONSTANT_FACTOR} × {limit:?}: {within:?}"),
    ));
    let empty = Vec::new();
    let points = |v: &Value| v.pointer("/points").and_then(Value::as_array).cloned();
    let old = points(baseline).unwrap_or_default();
    for p in points(fresh).as_ref().unwrap_or(&empty) {
        let n = p.get("particles").and_then(Value::as_u64);
        let Some(q) = old
            .iter()
            .find(|q| q.get("particles").and_then(Value::as_u64) == n)
        else {
            continue;
        };
        let (r, rb) = (
            number(p, "/lower_bound/ratio"),
            number(q, "/lower_bound/ratio"),
        );
        let passed =
            matches!((r, rb), (Some(r), Some(rb)) if r >= rb - DETERMINISTIC_TOLERANCE * rb.abs());
        checks.push(check(
            &format!("lower-ratio-N{}", n.unwrap_or(0)),
            passed,
            format!("{r:?} against baseline {rb:?}"),
        ));
    }
    checks
}

pub fn compare(config: &RunConfig, fresh: &Value, baseline: &Value) -> BaselineReport {
    let checks = match config {
        RunConfig::Vmc(_) => vmc_checks(fresh, baseline),
        RunConfig::Sweep(_) => sweep_checks(fresh, baseline),
        _ => {
            let bad = numeric_mismatches(fresh, baseline, DETERMINISTIC_TOLERANCE);
            let detail = if bad.is_empty() {
                format!("all leaves within {DETERMINISTIC_TOLERANCE:e}")
            } else {
                format!(
                    "{} mismatches; first: {}",
                    bad.len(),
                    bad[..bad.len().min(5)].join("; ")
                )
            };
            vec![check("results", bad.is_empty(), detail)]
        }
    };
    BaselineReport::new(checks)
}
