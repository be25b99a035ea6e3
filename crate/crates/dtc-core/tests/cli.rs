//! End-to-end tests of the `dtc` binary: artifact schemas, manifest-driven
//! bit-identical reruns, strict config validation, and output-root
//! resolution, all through the real executable.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn dtc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dtc"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "command failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn first_line(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

const MF_CONFIG: &str = "T = 1.0\nepsilonT = 0.05\nJT = 1.0\nlambdaT = 0.05\n\
                         n_periods = 16\nsteps_per_period = 200\n";

#[test]
fn help_names_every_subcommand() {
    let out = run_ok(dtc().arg("--help"));
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    for sub in [
        "psos",
        "mf-evolve",
        "mps-evolve",
        "ed-evolve",
        "spectrum",
        "scan-delta",
        "reproduce",
    ] {
        assert!(text.contains(sub), "--help must mention `{sub}`:\n{text}");
    }
}

#[test]
fn mf_evolve_artifacts_and_manifest_rerun_are_bit_identical() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "run.toml", MF_CONFIG);
    run_ok(dtc().args([
        "--out",
        dir.path().to_str().unwrap(),
        "mf-evolve",
        "--config",
        &config,
        "--label",
        "first",
        "--spectrum",
    ]));

    let csv = dir.path().join("first.csv");
    let spectrum = dir.path().join("first.spectrum.csv");
    let manifest = dir.path().join("first.manifest.json");
    assert_eq!(first_line(&csv), "n,P,Q,sigma_y");
    assert_eq!(first_line(&spectrum), "omega_over_omega_drive,magnitude_sq");
    assert!(manifest.exists());
    // The series must include the n = 0 row.
    let body = fs::read_to_string(&csv).unwrap();
    assert!(body.lines().nth(1).unwrap().starts_with("0,"));

    // Re-running from the manifest into a fresh root reproduces the
    // artifacts byte for byte.
    let rerun = TempDir::new().unwrap();
    run_ok(dtc().args([
        "--out",
        rerun.path().to_str().unwrap(),
        "reproduce",
        "--manifest",
        manifest.to_str().unwrap(),
    ]));
    for name in ["first.csv", "first.spectrum.csv"] {
        let original = fs::read(dir.path().join(name)).unwrap();
        let replayed = fs::read(rerun.path().join(name)).unwrap();
        assert_eq!(original, replayed, "{name} must replay bit-identically");
    }
}

#[test]
fn unknown_config_key_is_fatal_and_named() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        "typo.toml",
        "T = 1.0\nepsilonT = 0.05\nJT = 1.0\nlambdaT = 0.05\nlambbdaT = 0.1\n",
    );
    let out = dtc()
        .args([
            "--out",
            dir.path().to_str().unwrap(),
            "mf-evolve",
            "--config",
            &config,
        ])
        .output()
        .unwrap();
    assert!(!out.status.success(), "typo config must be rejected");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("lambbdaT"),
        "error must name the offending key, got: {stderr}"
    );
}

#[test]
fn psos_schema_and_seed_grid() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        "psos.toml",
        "T = 1.0\nepsilonT = 0.0\nJT = 1.0\nlambdaT = 0.0\nn_periods = 4\n\
         steps_per_period = 150\ngrid_p = 3\ngrid_q = 2\nq_max = 0.5\n",
    );
    run_ok(dtc().args([
        "--out",
        dir.path().to_str().unwrap(),
        "psos",
        "--config",
        &config,
    ]));
    let csv = dir.path().join("psos.csv");
    assert_eq!(first_line(&csv), "seed_P,seed_Q,n,P,Q");
    // 3×2 seeds × (n = 0..=4) rows.
    let rows = fs::read_to_string(&csv).unwrap().lines().count() - 1;
    assert_eq!(rows, 3 * 2 * 5);
}

#[test]
fn quantum_engines_share_the_evolution_schema() {
    let dir = TempDir::new().unwrap();
    let base = "T = 1.0\nN = 3\nepsilonT = 0.05\nJT = 0.4\nlambdaT = 0.05\n\
                dt_over_T = 0.005\nn_periods = 4\n";
    let ed_config = write_config(dir.path(), "ed.toml", base);
    let mps_config = write_config(
        dir.path(),
        "mps.toml",
        &format!("{base}M = 4\n"),
    );
    run_ok(dtc().args([
        "--out",
        dir.path().to_str().unwrap(),
        "ed-evolve",
        "--config",
        &ed_config,
        "--label",
        "ed",
    ]));
    run_ok(dtc().args([
        "--out",
        dir.path().to_str().unwrap(),
        "mps-evolve",
        "--config",
        &mps_config,
        "--label",
        "mps",
    ]));
    for label in ["ed", "mps"] {
        let csv = dir.path().join(format!("{label}.csv"));
        assert_eq!(
            first_line(&csv),
            "n,magnetization,cumulative_truncation_weight"
        );
        let body = fs::read_to_string(&csv).unwrap();
        assert_eq!(body.lines().count() - 1, 5, "n = 0..=4 rows for {label}");
        assert!(body.lines().nth(1).unwrap().starts_with("0,"));
    }
    // Same chain, same schedule-free physics scale: the two engines agree
    // loosely even at this coarse step (sanity, not the acceptance bound).
    let read_final = |label: &str| -> f64 {
        let body = fs::read_to_string(dir.path().join(format!("{label}.csv"))).unwrap();
        body.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap()
    };
    assert!((read_final("ed") - read_final("mps")).abs() < 1e-3);
}

#[test]
fn spectrum_subcommand_reads_series_artifacts() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "run.toml", MF_CONFIG);
    run_ok(dtc().args([
        "--out",
        dir.path().to_str().unwrap(),
        "mf-evolve",
        "--config",
        &config,
        "--label",
        "series",
    ]));
    run_ok(dtc().args([
        "--out",
        dir.path().to_str().unwrap(),
        "spectrum",
        "--input",
        dir.path().join("series.csv").to_str().unwrap(),
        "--label",
        "spec",
    ]));
    let csv = dir.path().join("spec.csv");
    assert_eq!(first_line(&csv), "omega_over_omega_drive,magnitude_sq");
    // 16 stroboscopic samples (n ≥ 1) → 16 frequency bins.
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count() - 1, 16);
}

#[test]
fn scan_delta_schema_and_grid() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        "scan.toml",
        "T = 1.0\nJT = 1.0\nn_periods = 8\nsteps_per_period = 150\n\
         delta_start = 0.04\ndelta_stop = 0.06\ndelta_count = 3\n",
    );
    run_ok(dtc().args([
        "--out",
        dir.path().to_str().unwrap(),
        "scan-delta",
        "--config",
        &config,
        "--engine",
        "meanfield",
    ]));
    let csv = dir.path().join("scan-delta.csv");
    assert_eq!(first_line(&csv), "delta,peak");
    let body = fs::read_to_string(&csv).unwrap();
    let deltas: Vec<f64> = body
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(deltas.len(), 3);
    assert!((deltas[0] - 0.04).abs() < 1e-12 && (deltas[2] - 0.06).abs() < 1e-12);
}

#[test]
fn dtc_out_environment_variable_sets_the_root() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "run.toml", MF_CONFIG);
    run_ok(
        dtc()
            .env("DTC_OUT", dir.path())
            .args(["mf-evolve", "--config", &config, "--label", "enved"]),
    );
    assert!(dir.path().join("enved.csv").exists());
    assert!(dir.path().join("enved.manifest.json").exists());
}
