//! Experiment orchestration: each function executes one subcommand's
//! pipeline, writes its CSV artifacts plus a JSON manifest, and returns the
//! paths. The CLI binary is a thin argument-parsing shell around this
//! module, so integration tests can drive the exact production pipelines
//! in-process.
//!
//! All writes are atomic (temp file + rename) and all content is
//! deterministic; re-running a manifest reproduces the CSV bytes exactly.

use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::analysis::{self, EngineSelector};
use crate::ed;
use crate::figures::{self, RunKind};
use crate::io::config::RunConfig;
use crate::io::csvio;
use crate::io::manifest::RunManifest;
use crate::meanfield::{self, MeanFieldState};
use crate::model::{MagnetizationAxis, ProductStateSpec};
use crate::mps;
use crate::{Error, Result, StroboscopicSeries};

/// Engine backend selector shared by `scan-delta` and the preset table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    MeanField,
    Mps,
    Ed,
}

impl EngineKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "meanfield" => Ok(EngineKind::MeanField),
            "mps" => Ok(EngineKind::Mps),
            "ed" => Ok(EngineKind::Ed),
            other => Err(Error::Config(format!(
                "unknown engine `{other}`; expected one of meanfield, mps, ed"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EngineKind::MeanField => "meanfield",
            EngineKind::Mps => "mps",
            EngineKind::Ed => "ed",
        }
    }
}

/// Paths produced by one run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub outputs: Vec<PathBuf>,
    pub manifest_path: PathBuf,
}

/// Figure/criterion stamps for manifests written under `reproduce`.
#[derive(Debug, Clone, Copy, Default)]
struct Provenance<'a> {
    figure: Option<&'a str>,
    criterion_note: Option<&'a str>,
}

fn write_file_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)
        .map_err(|e| Error::io(format!("writing {}", tmp.display()), e))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| Error::io(format!("renaming into {}", path.display()), e))
}

/// Write every artifact and the manifest; fills outputs and wall time.
fn emit(
    out_dir: &Path,
    mut manifest: RunManifest,
    files: Vec<(String, Vec<u8>)>,
    started: Instant,
) -> Result<RunOutcome> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::io(format!("creating {}", out_dir.display()), e))?;
    let mut outputs = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let path = out_dir.join(&name);
        write_file_atomic(&path, &bytes)?;
        manifest.outputs.push(name);
        outputs.push(path);
    }
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    let manifest_path = out_dir.join(format!("{}.manifest.json", manifest.label));
    manifest.write_atomic(&manifest_path)?;
    Ok(RunOutcome {
        outputs,
        manifest_path,
    })
}

/// Fill the documented defaults for every model key the run used, keeping
/// user-supplied literals untouched so re-resolution is exact.
fn resolve_model_keys(
    cfg: &RunConfig,
    default_n: Option<u32>,
    default_epsilon_t: Option<f64>,
) -> RunConfig {
    let mut r = cfg.clone();
    if r.n.is_none() {
        r.n = default_n;
    }
    if r.h.is_none() && r.epsilon_t.is_none() {
        r.epsilon_t = default_epsilon_t;
    }
    r.j_t = Some(r.j_t.unwrap_or(0.0));
    r.lambda_t = Some(r.lambda_t.unwrap_or(0.0));
    r.phi = Some(r.phi.unwrap_or(0.0));
    r
}

fn spectrum_bytes(series: &StroboscopicSeries) -> Result<Vec<u8>> {
    let spectrum = analysis::power_spectrum(series)?;
    let mut buf = Vec::new();
    csvio::write_spectrum(&mut buf, &spectrum)
        .map_err(|e| Error::io("formatting spectrum csv", e))?;
    Ok(buf)
}

// ---------------------------------------------------------------------------
// Subcommand pipelines
// ---------------------------------------------------------------------------

pub fn run_psos(cfg: &RunConfig, out_dir: &Path, label: &str) -> Result<RunOutcome> {
    run_psos_with(cfg, out_dir, label, Provenance::default())
}

fn run_psos_with(
    cfg: &RunConfig,
    out_dir: &Path,
    label: &str,
    prov: Provenance<'_>,
) -> Result<RunOutcome> {
    let started = Instant::now();
    let params = cfg.model_params(Some(1), None)?;
    let seeds = cfg.seed_grid()?;
    let cloud = meanfield::psos(&seeds, cfg.n_periods(), &params, cfg.steps_per_period())?;

    let mut buf = Vec::new();
    csvio::write_psos(&mut buf, &cloud).map_err(|e| Error::io("formatting psos csv", e))?;

    let mut resolved = resolve_model_keys(cfg, Some(1), None);
    resolved.n_periods = Some(cfg.n_periods() as u32);
    resolved.steps_per_period = Some(cfg.steps_per_period() as u32);
    resolved.grid_p = Some(resolved.grid_p.unwrap_or(24));
    resolved.grid_q = Some(resolved.grid_q.unwrap_or(24));
    resolved.q_max = Some(resolved.q_max.unwrap_or(0.95));

    let mut manifest = RunManifest::new("psos", label, resolved);
    manifest.engine = Some("meanfield".into());
    manifest.figure = prov.figure.map(String::from);
    manifest.criterion_note = prov.criterion_note.map(String::from);
    if !cloud.skipped_seeds.is_empty() {
        manifest.notes = Some(format!(
            "{} seed(s) skipped: within the |Q| → 1 chart-pole zone",
            cloud.skipped_seeds.len()
        ));
    }
    emit(out_dir, manifest, vec![(format!("{label}.csv"), buf)], started)
}

pub fn run_mf_evolve(
    cfg: &RunConfig,
    out_dir: &Path,
    label: &str,
    with_spectrum: bool,
) -> Result<RunOutcome> {
    run_mf_evolve_with(cfg, out_dir, label, with_spectrum, Provenance::default())
}

fn run_mf_evolve_with(
    cfg: &RunConfig,
    out_dir: &Path,
    label: &str,
    with_spectrum: bool,
    prov: Provenance<'_>,
) -> Result<RunOutcome> {
    let started = Instant::now();
    let params = cfg.model_params(Some(1), None)?;
    let (p0, q0) = cfg.initial_chart_point();
    let start = MeanFieldState::new(p0, q0);
    let strobe = meanfield::stroboscopic(&start, cfg.n_periods(), &params, cfg.steps_per_period())?;

    let mut buf = Vec::new();
    csvio::write_stroboscopic(&mut buf, &strobe)
        .map_err(|e| Error::io("formatting stroboscopic csv", e))?;
    let mut files = vec![(format!("{label}.csv"), buf)];
    if with_spectrum {
        files.push((format!("{label}.spectrum.csv"), spectrum_bytes(&strobe.series())?));
    }

    let mut resolved = resolve_model_keys(cfg, Some(1), None);
    resolved.n_periods = Some(cfg.n_periods() as u32);
    resolved.steps_per_period = Some(cfg.steps_per_period() as u32);
    resolved.p0 = Some(p0);
    resolved.q0 = Some(q0);

    let mut manifest = RunManifest::new("mf-evolve", label, resolved);
    manifest.engine = Some("meanfield".into());
    manifest.figure = prov.figure.map(String::from);
    manifest.criterion_note = prov.criterion_note.map(String::from);
    if strobe.clamp_count > 0 {
        manifest.notes = Some(format!(
            "{} integrator step(s) clamped at the |Q| = 1 chart boundary",
            strobe.clamp_count
        ));
    }
    emit(out_dir, manifest, files, started)
}

pub fn run_mps_evolve(
    cfg: &RunConfig,
    out_dir: &Path,
    label: &str,
    with_spectrum: bool,
) -> Result<RunOutcome> {
    run_mps_evolve_with(cfg, out_dir, label, with_spectrum, Provenance::default())
}

fn run_mps_evolve_with(
    cfg: &RunConfig,
    out_dir: &Path,
    label: &str,
    with_spectrum: bool,
    prov: Provenance<'_>,
) -> Result<RunOutcome> {
    let started = Instant::now();
    let params = cfg.model_params(None, None)?;
    let max_bond = cfg.max_bond()?;
    let dt_over_t = cfg.dt_over_t()?;
    let spec = ProductStateSpec::new(params.phi, 1, params.n_sites)?;
    let state = mps::mps_from_product(&spec, max_bond)?;
    let axis = MagnetizationAxis::new(params.phi);
    let options = mps::EvolveOptions {
        truncation_budget: cfg.truncation_budget(),
    };
    let record = mps::evolve_periods(
        state,
        &params,
        dt_over_t * params.period,
        cfg.n_periods(),
        &axis,
        &options,
    )?;

    let mut buf = Vec::new();
    csvio::write_evolution(
        &mut buf,
        record.initial_magnetization,
        &record.series,
        Some(&record.cumulative_truncation),
    )
    .map_err(|e| Error::io("formatting evolution csv", e))?;
    let mut files = vec![(format!("{label}.csv"), buf)];
    if with_spectrum {
        files.push((format!("{label}.spectrum.csv"), spectrum_bytes(&record.series)?));
    }

    let mut resolved = resolve_model_keys(cfg, None, None);
    resolved.dt_over_t = Some(dt_over_t);
    resolved.n_periods = Some(cfg.n_periods() as u32);
    resolved.truncation_budget = Some(cfg.truncation_budget());

    let mut manifest = RunManifest::new("mps-evolve", label, resolved);
    manifest.engine = Some("mps".into());
    manifest.coefficient_set = Some(mps::COEFFICIENT_SET.into());
    manifest.figure = prov.figure.map(String::from);
    manifest.criterion_note = prov.criterion_note.map(String::from);
    emit(out_dir, manifest, files, started)
}

pub fn run_ed_evolve(
    cfg: &RunConfig,
    out_dir: &Path,
    label: &str,
    with_spectrum: bool,
) -> Result<RunOutcome> {
    let started = Instant::now();
    let params = cfg.model_params(None, None)?;
    let dt_over_t = cfg.dt_over_t()?;
    let spec = ProductStateSpec::new(params.phi, 1, params.n_sites)?;
    let state = ed::DenseState::from_product(&spec)?;
    let axis = MagnetizationAxis::new(params.phi);
    let record = ed::ed_evolve(
        state,
        &params,
        dt_over_t * params.period,
        cfg.n_periods(),
        &axis,
    )?;

    let mut buf = Vec::new();
    csvio::write_evolution(&mut buf, record.initial_magnetization, &record.series, None)
        .map_err(|e| Error::io("formatting evolution csv", e))?;
    let mut files = vec![(format!("{label}.csv"), buf)];
    if with_spectrum {
        files.push((format!("{label}.spectrum.csv"), spectrum_bytes(&record.series)?));
    }

    let mut resolved = resolve_model_keys(cfg, None, None);
    resolved.dt_over_t = Some(dt_over_t);
    resolved.n_periods = Some(cfg.n_periods() as u32);

    let mut manifest = RunManifest::new("ed-evolve", label, resolved);
    manifest.engine = Some("ed".into());
    emit(out_dir, manifest, files, started)
}

/// Spectrum of a stroboscopic series read from an existing CSV artifact.
///
/// `period` is the drive period of the series; the emitted
/// `omega_over_omega_drive` axis is dimensionless and independent of it.
pub fn run_spectrum_file(
    input: &Path,
    period: f64,
    out_dir: &Path,
    label: &str,
) -> Result<RunOutcome> {
    let started = Instant::now();
    let file = std::fs::File::open(input)
        .map_err(|e| Error::io(format!("opening input {}", input.display()), e))?;
    let series_file = csvio::read_series(BufReader::new(file), period)?;
    let buf = spectrum_bytes(&series_file.series)?;

    let input_abs = std::fs::canonicalize(input)
        .map_err(|e| Error::io(format!("resolving input {}", input.display()), e))?;
    let config = RunConfig {
        t: Some(period),
        ..RunConfig::default()
    };
    let mut manifest = RunManifest::new("spectrum", label, config);
    manifest.input = Some(input_abs.display().to_string());
    manifest.notes = Some(format!("value column: {}", series_file.column));
    emit(out_dir, manifest, vec![(format!("{label}.csv"), buf)], started)
}

pub fn run_scan(
    cfg: &RunConfig,
    engine: EngineKind,
    out_dir: &Path,
    label: &str,
) -> Result<RunOutcome> {
    run_scan_with(cfg, engine, out_dir, label, Provenance::default())
}

fn run_scan_with(
    cfg: &RunConfig,
    engine: EngineKind,
    out_dir: &Path,
    label: &str,
    prov: Provenance<'_>,
) -> Result<RunOutcome> {
    let started = Instant::now();
    let default_n = match engine {
        EngineKind::MeanField => Some(1),
        _ => None,
    };
    // The scan sets εT = λT = δ per point; the base detuning is unused.
    let params = cfg.model_params(default_n, Some(0.0))?;
    let deltas = cfg.delta_grid()?;
    let selector = match engine {
        EngineKind::MeanField => EngineSelector::MeanField {
            steps_per_period: cfg.steps_per_period(),
        },
        EngineKind::Mps => EngineSelector::Mps {
            max_bond: cfg.max_bond()?,
            dt_over_t: cfg.dt_over_t()?,
        },
        EngineKind::Ed => EngineSelector::Ed {
            dt_over_t: cfg.dt_over_t()?,
        },
    };
    let curve = analysis::scan_delta(&params, &deltas, cfg.n_periods(), &selector)?;

    let mut buf = Vec::new();
    csvio::write_scan(&mut buf, &curve).map_err(|e| Error::io("formatting scan csv", e))?;

    let mut resolved = resolve_model_keys(cfg, default_n, Some(0.0));
    resolved.n_periods = Some(cfg.n_periods() as u32);
    resolved.delta_start = Some(resolved.delta_start.unwrap_or(0.01));
    resolved.delta_stop = Some(resolved.delta_stop.unwrap_or(0.20));
    resolved.delta_count = Some(resolved.delta_count.unwrap_or(20));
    match engine {
        EngineKind::MeanField => {
            resolved.steps_per_period = Some(cfg.steps_per_period() as u32);
        }
        EngineKind::Mps => {
            resolved.dt_over_t = Some(cfg.dt_over_t()?);
        }
        EngineKind::Ed => {
            resolved.dt_over_t = Some(cfg.dt_over_t()?);
        }
    }

    let mut manifest = RunManifest::new("scan-delta", label, resolved);
    manifest.engine = Some(engine.name().into());
    manifest.figure = prov.figure.map(String::from);
    manifest.criterion_note = prov.criterion_note.map(String::from);
    let failed: Vec<String> = curve
        .points
        .iter()
        .filter_map(|p| p.error.as_ref().map(|e| format!("δ = {}: {e}", p.delta)))
        .collect();
    if !failed.is_empty() {
        manifest.notes = Some(format!("failed points: {}", failed.join("; ")));
    }
    emit(out_dir, manifest, vec![(format!("{label}.csv"), buf)], started)
}

/// Execute a preset bundle into `out_dir/<figure>/`.
pub fn run_reproduce(
    figure: &str,
    sites: Option<u32>,
    bond: Option<u32>,
    out_dir: &Path,
) -> Result<Vec<RunOutcome>> {
    let mut recipe = figures::recipe(figure)?;
    figures::apply_overrides(&mut recipe, sites, bond)?;
    let bundle_dir = out_dir.join(figure);
    let prov = Provenance {
        figure: Some(recipe.figure),
        criterion_note: recipe.criterion_note,
    };
    let mut outcomes = Vec::with_capacity(recipe.runs.len());
    for run in &recipe.runs {
        let outcome = match run.kind {
            RunKind::Psos => run_psos_with(&run.config, &bundle_dir, &run.label, prov)?,
            RunKind::MfEvolve => {
                run_mf_evolve_with(&run.config, &bundle_dir, &run.label, run.with_spectrum, prov)?
            }
            RunKind::MpsEvolve => {
                run_mps_evolve_with(&run.config, &bundle_dir, &run.label, run.with_spectrum, prov)?
            }
            RunKind::ScanDelta(engine) => {
                run_scan_with(&run.config, engine, &bundle_dir, &run.label, prov)?
            }
        };
        outcomes.push(outcome);
    }
    Ok(outcomes)
}

/// Re-run the experiment a manifest describes, writing into `out_dir`.
/// The CSV artifacts come out bit-identical to the originals.
pub fn rerun_manifest(manifest_path: &Path, out_dir: &Path) -> Result<RunOutcome> {
    let manifest = RunManifest::load(manifest_path)?;
    let label = manifest.label.as_str();
    let cfg = &manifest.config;
    let with_spectrum = manifest
        .outputs
        .iter()
        .any(|o| o.ends_with(".spectrum.csv"));
    match manifest.subcommand.as_str() {
        "psos" => run_psos(cfg, out_dir, label),
        "mf-evolve" => run_mf_evolve(cfg, out_dir, label, with_spectrum),
        "mps-evolve" => run_mps_evolve(cfg, out_dir, label, with_spectrum),
        "ed-evolve" => run_ed_evolve(cfg, out_dir, label, with_spectrum),
        "scan-delta" => {
            let engine = manifest
                .engine
                .as_deref()
                .ok_or_else(|| Error::Config("scan manifest lacks an engine".into()))?;
            run_scan(cfg, EngineKind::parse(engine)?, out_dir, label)
        }
        "spectrum" => {
            let input = manifest
                .input
                .as_deref()
                .ok_or_else(|| Error::Config("spectrum manifest lacks an input path".into()))?;
            run_spectrum_file(
                Path::new(input),
                cfg.t.unwrap_or(1.0),
                out_dir,
                label,
            )
        }
        other => Err(Error::Config(format!(
            "manifest names unknown subcommand `{other}`"
        ))),
    }
}
