//! Output directory, manifest and file writers.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use dilute_bose::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Failed,
    BaselineMismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub status: Status,
    pub error: Option<String>,
    /// Files written by the run, in the order they were written.
    pub outputs: Vec<String>,
    pub config: RunConfig,
}

pub const MANIFEST: &str = "manifest.json";

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// Output directory that records what was written to it.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn record(&mut self, name: &str) {
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| Error::Parse(format!("serializing {name}: {e}")))?;
        text.push('\n');
        fs::write(self.root.join(name), text)?;
        self.record(name);
        Ok(())
    }

    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let mut w = csv::Writer::from_path(self.root.join(name)).map_err(csv_error)?;
        for row in rows {
            w.serialize(row).map_err(csv_error)?;
        }
        w.flush()?;
        self.record(name);
        Ok(())
    }

    pub fn outputs(&self) -> Vec<String> {
        self.written.clone()
    }

    pub fn finish(
        &mut self,
        config: &RunConfig,
        status: Status,
        error: Option<String>,
    ) -> Result<()> {
        let manifest = Manifest {
            tool: "dilute-bose".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            status,
            error,
            outputs: self.outputs(),
            config: config.clone(),
        };
        self.json(MANIFEST, &manifest)
    }
}

fn csv_error(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            _ => unreachable!(),
        }
    } else {
        Error::Parse(e.to_string())
    }
}
