//! JSON run manifests.
//!
//! A manifest is written atomically next to every CSV artifact and records
//! everything needed to re-run it: the subcommand, the fully resolved
//! configuration (every value the run actually used, in config-file key
//! names), the engine, and the output file names. Re-running a manifest
//! reproduces the CSVs bit-identically; only the timestamp and wall time
//! differ.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::io::config::RunConfig;
use crate::{Error, Result, VERSION};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Subcommand that produced the artifact (`psos`, `mps-evolve`, …).
    pub subcommand: String,
    /// Engine backend for subcommands that select one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub engine: Option<String>,
    /// Experiment-preset id when the run came from `reproduce`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub figure: Option<String>,
    /// Which acceptance criterion this bundle feeds, if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub criterion_note: Option<String>,
    /// File-name stem of the outputs.
    pub label: String,
    /// Fully resolved configuration (defaults filled in for every key the
    /// run used).
    pub config: RunConfig,
    /// Input CSV path for runs that read one (`spectrum`).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub input: Option<String>,
    /// Trotter coefficient-set name for quantum evolutions.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coefficient_set: Option<String>,
    /// Output file names, relative to the manifest's directory.
    pub outputs: Vec<String>,
    pub unix_timestamp: u64,
    pub wall_time_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub notes: Option<String>,
}

impl RunManifest {
    /// Fresh manifest skeleton; the runner fills outputs and timing.
    pub fn new(subcommand: &str, label: &str, config: RunConfig) -> Self {
        RunManifest {
            tool: "dtc".into(),
            version: VERSION.into(),
            subcommand: subcommand.into(),
            engine: None,
            figure: None,
            criterion_note: None,
            label: label.into(),
            config,
            input: None,
            coefficient_set: None,
            outputs: Vec::new(),
            unix_timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            wall_time_seconds: 0.0,
            notes: None,
        }
    }

    /// Write as pretty JSON via a sibling temp file + rename, so a manifest
    /// is never observed half-written.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("serializing manifest: {e}")))?;
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, text + "\n")
            .map_err(|e| Error::io(format!("writing manifest {}", tmp.display()), e))?;
        std::fs::rename(&tmp, path)
            .map_err(|e| Error::io(format!("renaming manifest into {}", path.display()), e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading manifest {}", path.display()), e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("parsing manifest {}: {e}", path.display())))
    }
}
