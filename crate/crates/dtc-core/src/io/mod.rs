//! Configuration files, CSV artifacts, and run manifests.
//!
//! * [`config`] — the flat TOML run configuration; unknown keys are fatal
//!   and named in the error.
//! * [`csvio`] — readers/writers for the CSV schemas (17-significant-digit
//!   floats, deterministic content).
//! * [`manifest`] — the JSON manifest written atomically alongside every
//!   output; re-running a manifest reproduces the CSVs bit-identically.

pub mod config;
pub mod csvio;
pub mod manifest;

pub use config::RunConfig;
pub use csvio::SeriesFile;
pub use manifest::RunManifest;
