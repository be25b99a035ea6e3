//! `dtc` — discrete-time-crystal simulator CLI.
//!
//! Thin argument-parsing shell over `dtc_core::runner`; every pipeline
//! writes CSV artifacts plus a JSON manifest and is reproducible from that
//! manifest bit-identically.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dtc_core::runner::{self, EngineKind, RunOutcome};
use dtc_core::io::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "dtc",
    version,
    about = "Discrete-time-crystal simulator for a driven spin-1/2 Ising chain",
    long_about = "Discrete-time-crystal simulator for a driven spin-1/2 Ising chain.\n\
        Every run writes CSV artifacts plus a JSON manifest; re-running a manifest\n\
        (`reproduce --manifest <file>`) reproduces the CSVs bit-identically.\n\
        Output root: --out, else the DTC_OUT environment variable, else the\n\
        current directory."
)]
struct Cli {
    /// Output root directory (overrides the DTC_OUT environment variable).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Poincaré surface of section of the mean-field dynamics over a seed grid.
    Psos {
        /// TOML run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output file stem (default: the subcommand name).
        #[arg(long)]
        label: Option<String>,
    },
    /// Mean-field stroboscopic evolution from one chart point.
    MfEvolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        label: Option<String>,
        /// Also write the power spectrum of the series.
        #[arg(long)]
        spectrum: bool,
    },
    /// Quantum evolution in the matrix-product-state engine.
    MpsEvolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        spectrum: bool,
    },
    /// Quantum evolution in the dense exact engine (N ≤ 14).
    EdEvolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        spectrum: bool,
    },
    /// Power spectrum of a stroboscopic series read from a CSV artifact.
    Spectrum {
        /// Input CSV with an `n` column and a magnetization/sigma_y/value column.
        #[arg(long)]
        input: PathBuf,
        /// Drive period of the series (scale only; the dimensionless output
        /// axis does not depend on it).
        #[arg(long, default_value_t = 1.0)]
        period: f64,
        #[arg(long)]
        label: Option<String>,
    },
    /// Subharmonic peak vs imperfection strength δ (εT = λT = δ).
    ScanDelta {
        #[arg(long)]
        config: PathBuf,
        /// Backend: meanfield, mps, or ed.
        #[arg(long)]
        engine: String,
        #[arg(long)]
        label: Option<String>,
    },
    /// Run a named experiment preset (fig1a..fig7), or re-run a manifest.
    Reproduce {
        /// Preset id: fig1a..fig1f, fig2, fig3a..fig3d, fig4, fig5, fig6, fig7.
        figure: Option<String>,
        /// Re-run this manifest instead of a preset.
        #[arg(long, conflicts_with = "figure")]
        manifest: Option<PathBuf>,
        /// Override the site count N (quantum presets).
        #[arg(long)]
        sites: Option<u32>,
        /// Override the bond-dimension cap M (quantum presets).
        #[arg(long)]
        bond: Option<u32>,
    },
}

fn out_dir(cli_out: &Option<PathBuf>) -> PathBuf {
    cli_out
        .clone()
        .or_else(|| std::env::var_os("DTC_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn report(outcomes: &[RunOutcome]) {
    for outcome in outcomes {
        for path in &outcome.outputs {
            println!("wrote {}", path.display());
        }
        println!("wrote {}", outcome.manifest_path.display());
    }
}

fn run(cli: Cli) -> Result<(), (String, dtc_core::Error)> {
    let out = out_dir(&cli.out);
    let stage_of = |cmd: &Command| -> String {
        match cmd {
            Command::Psos { .. } => "psos",
            Command::MfEvolve { .. } => "mf-evolve",
            Command::MpsEvolve { .. } => "mps-evolve",
            Command::EdEvolve { .. } => "ed-evolve",
            Command::Spectrum { .. } => "spectrum",
            Command::ScanDelta { .. } => "scan-delta",
            Command::Reproduce { .. } => "reproduce",
        }
        .to_string()
    };
    let stage = stage_of(&cli.command);
    let fail = |e: dtc_core::Error| (stage.clone(), e);

    match &cli.command {
        Command::Psos { config, label } => {
            let cfg = RunConfig::load(config).map_err(fail)?;
            let label = label.as_deref().unwrap_or("psos");
            let outcome = runner::run_psos(&cfg, &out, label).map_err(fail)?;
            report(&[outcome]);
        }
        Command::MfEvolve {
            config,
            label,
            spectrum,
        } => {
            let cfg = RunConfig::load(config).map_err(fail)?;
            let label = label.as_deref().unwrap_or("mf-evolve");
            let outcome = runner::run_mf_evolve(&cfg, &out, label, *spectrum).map_err(fail)?;
            report(&[outcome]);
        }
        Command::MpsEvolve {
            config,
            label,
            spectrum,
        } => {
            let cfg = RunConfig::load(config).map_err(fail)?;
            let label = label.as_deref().unwrap_or("mps-evolve");
            let outcome = runner::run_mps_evolve(&cfg, &out, label, *spectrum).map_err(fail)?;
            report(&[outcome]);
        }
        Command::EdEvolve {
            config,
            label,
            spectrum,
        } => {
            let cfg = RunConfig::load(config).map_err(fail)?;
            let label = label.as_deref().unwrap_or("ed-evolve");
            let outcome = runner::run_ed_evolve(&cfg, &out, label, *spectrum).map_err(fail)?;
            report(&[outcome]);
        }
        Command::Spectrum {
            input,
            period,
            label,
        } => {
            let label = label.as_deref().unwrap_or("spectrum");
            let outcome =
                runner::run_spectrum_file(input, *period, &out, label).map_err(fail)?;
            report(&[outcome]);
        }
        Command::ScanDelta {
            config,
            engine,
            label,
        } => {
            let cfg = RunConfig::load(config).map_err(fail)?;
            let engine = EngineKind::parse(engine).map_err(fail)?;
            let label = label.as_deref().unwrap_or("scan-delta");
            let outcome = runner::run_scan(&cfg, engine, &out, label).map_err(fail)?;
            report(&[outcome]);
        }
        Command::Reproduce {
            figure,
            manifest,
            sites,
            bond,
        } => match (figure, manifest) {
            (_, Some(path)) => {
                let outcome = runner::rerun_manifest(path, &out).map_err(fail)?;
                report(&[outcome]);
            }
            (Some(figure), None) => {
                let outcomes =
                    runner::run_reproduce(figure, *sites, *bond, &out).map_err(fail)?;
                report(&outcomes);
            }
            (None, None) => {
                return Err(fail(dtc_core::Error::Config(
                    "pass a preset id (fig1a..fig7) or --manifest <file>".into(),
                )));
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((stage, err)) => {
            eprintln!("dtc: error in stage `{stage}`: {err}");
            ExitCode::FAILURE
        }
    }
}
