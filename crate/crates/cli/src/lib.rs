//! Command-line front end: resolves arguments into a [`RunConfig`], runs
//! the matching pipeline and records a manifest next to the outputs.
//!
//! Every run directory holds `manifest.json` (tool, version, status, the
//! resolved configuration and the list of files written) and
//! `results.json`; profiles and tables are CSV. Re-running a manifest
//! reproduces the outputs byte for byte.

pub mod args;
pub mod baseline;
pub mod config;
pub mod output;
pub mod pipeline;

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use dilute_bose::{Error, Result};

pub use config::RunConfig;
pub use output::{Manifest, OutputDir, Status};

/// Threads of the global pool; unset leaves rayon's default.
pub const THREADS_ENV: &str = "DILUTE_BOSE_THREADS";

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn dispatch(config: &RunConfig, baseline: Option<&Value>, out: &mut OutputDir) -> Result<Value> {
    match config {
        RunConfig::Scatter(c) => to_value(&pipeline::scatter(c, out)?),
        RunConfig::Gp(c) => to_value(&pipeline::gp(c, out)?),
        RunConfig::Homog(c) => to_value(&pipeline::homog(c, out)?),
        RunConfig::Vmc(c) => to_value(&pipeline::vmc(c, out)?),
        RunConfig::Boxes(c) => to_value(&pipeline::boxes(c, out)?),
        RunConfig::Sweep(c) => {
            let limit = baseline.and_then(baseline::max_implied_constant);
            to_value(&pipeline::sweep_study(c, limit, out)?)
        }
    }
}

/// Runs `config` into `out`. The manifest is written in every case; a
/// failed baseline comparison is reported as [`Error::Inconclusive`].
pub fn execute(config: &RunConfig, out: &Path, baseline: Option<&Path>) -> Result<Value> {
    let mut dir = OutputDir::create(out)?;
    let reference = match baseline.map(read_json).transpose() {
        Ok(r) => r,
        Err(e) => {
            dir.finish(config, Status::Failed, Some(e.to_string()))?;
            return Err(e);
        }
    };
    let results = match dispatch(config, reference.as_ref(), &mut dir) {
        Ok(v) => v,
        Err(e) => {
            dir.finish(config, Status::Failed, Some(e.to_string()))?;
            return Err(e);
        }
    };
    if let Some(reference) = &reference {
        let report = baseline::compare(config, &results, reference);
        dir.json("baseline.json", &report)?;
        if !report.passed {
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.as_str())
                .collect();
            let msg = format!("baseline mismatch: {}", failed.join(", "));
            dir.finish(config, Status::BaselineMismatch, Some(msg.clone()))?;
            return Err(Error::Inconclusive(msg));
        }
    }
    dir.finish(config, Status::Ok, None)?;
    Ok(results)
}
