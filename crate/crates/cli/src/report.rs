//! The summary report and the files written under `--out`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use hypsym::cubic::{ConditionReport, GridPoint};

use crate::error::CliError;

pub const REPORT_FILE: &str = "report.json";
pub const META_FILE: &str = "run_meta.json";

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub model: Value,
    pub config: Value,
    pub holds: bool,
    pub constants: BTreeMap<String, f64>,
    pub worst_point: Option<Value>,
    /// Command-specific detail: condition reports, tables, matrices.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Report {
    pub fn new(model: Value, config: Value) -> Self {
        Self {
            model,
            config,
            holds: true,
            constants: BTreeMap::new(),
            worst_point: None,
            details: Value::Null,
        }
    }

    /// Folds a condition report in: constants are prefixed with its name and
    /// the worst point of the first failing (else the tightest) check is kept.
    pub fn absorb(&mut self, r: &ConditionReport, tightest: &mut f64) {
        for (k, v) in &r.constants {
            self.constants.insert(format!("{}.{k}", r.name), *v);
        }
        self.constants.insert(format!("{}.margin", r.name), r.margin);
        let first_failure = self.holds && !r.holds;
        if first_failure || (self.holds && r.margin < *tightest) {
            self.worst_point = r.worst_point.as_ref().map(point_value);
            *tightest = r.margin;
        }
        self.holds &= r.holds;
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn point_value(p: &GridPoint) -> Value {
    serde_json::to_value(p).expect("grid point serializes")
}

/// Run metadata kept apart from the deterministic payload.
#[derive(Debug, Serialize)]
pub struct RunMeta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
    pub exit_code: u8,
    pub files: Vec<String>,
}

pub struct OutDir {
    dir: Option<PathBuf>,
    written: Vec<String>,
}

impl OutDir {
    pub fn new(dir: Option<PathBuf>) -> Result<Self, CliError> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).map_err(|e| CliError::Io(format!("{}: {e}", d.display())))?;
        }
        Ok(Self {
            dir,
            written: Vec::new(),
        })
    }

    pub fn enabled(&self) -> bool {
        self.dir.is_some()
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        if let Some(d) = &self.dir {
            let path = d.join(name);
            fs::write(&path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            self.written.push(name.to_string());
        }
        Ok(())
    }

    pub fn path(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }
}
