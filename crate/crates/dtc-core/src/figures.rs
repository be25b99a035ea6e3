//! Named experiment presets (`fig1a` … `fig7`) for the `reproduce`
//! subcommand.
//!
//! Each preset expands to one or more concrete runs with fully pinned
//! parameters (all periods are `T = 1`; the physics is controlled by the
//! dimensionless products `JT`, `εT`, `λT`). Quantum presets default to
//! `N = 30`, `M = 30` and accept `--sites` / `--bond` overrides so the same
//! bundle can run desk-scale.

use crate::io::config::RunConfig;
use crate::runner::EngineKind;
use crate::{Error, Result};

/// What a single preset run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Psos,
    MfEvolve,
    MpsEvolve,
    ScanDelta(EngineKind),
}

/// One concrete run of a preset bundle.
#[derive(Debug, Clone)]
pub struct FigureRun {
    /// Output file stem, e.g. `fig2_jt3`.
    pub label: String,
    pub kind: RunKind,
    pub config: RunConfig,
    /// Also emit the power spectrum of the run's stroboscopic series.
    pub with_spectrum: bool,
}

/// A preset bundle: the runs of one figure id.
#[derive(Debug, Clone)]
pub struct FigureRecipe {
    pub figure: &'static str,
    /// Which acceptance criterion the bundle feeds, if any.
    pub criterion_note: Option<&'static str>,
    /// Whether `--sites`/`--bond` overrides apply.
    pub quantum: bool,
    pub runs: Vec<FigureRun>,
}

/// Every known preset id.
pub fn figure_ids() -> &'static [&'static str] {
    &[
        "fig1a", "fig1b", "fig1c", "fig1d", "fig1e", "fig1f", "fig2", "fig3a", "fig3b",
        "fig3c", "fig3d", "fig4", "fig5", "fig6", "fig7",
    ]
}

fn classical_base(jt: f64, delta: f64, n_periods: u32) -> RunConfig {
    RunConfig {
        t: Some(1.0),
        j_t: Some(jt),
        epsilon_t: Some(delta),
        lambda_t: Some(delta),
        n_periods: Some(n_periods),
        ..RunConfig::default()
    }
}

fn quantum_base(jt: f64, delta: f64, n_sites: u32, n_periods: u32) -> RunConfig {
    RunConfig {
        t: Some(1.0),
        n: Some(n_sites),
        j_t: Some(jt),
        epsilon_t: Some(delta),
        lambda_t: Some(delta),
        dt_over_t: Some(0.001),
        m: Some(30),
        n_periods: Some(n_periods),
        ..RunConfig::default()
    }
}

/// Expand a preset id into its runs.
pub fn recipe(figure: &str) -> Result<FigureRecipe> {
    let single = |label: &str, kind, config, with_spectrum| FigureRecipe {
        figure: figure_ids()
            .iter()
            .find(|f| **f == figure)
            .expect("checked by caller"),
        criterion_note: None,
        quantum: false,
        runs: vec![FigureRun {
            label: label.to_string(),
            kind,
            config,
            with_spectrum,
        }],
    };

    let r = match figure {
        // Poincaré sections across the coupling/imperfection plane.
        "fig1a" => single("fig1a", RunKind::Psos, classical_base(1.0, 0.0, 200), false),
        "fig1b" => single("fig1b", RunKind::Psos, classical_base(1.0, 0.05, 200), false),
        "fig1c" => single("fig1c", RunKind::Psos, classical_base(1.0, 0.5, 200), false),
        "fig1d" => single("fig1d", RunKind::Psos, classical_base(2.0, 0.05, 200), false),
        "fig1e" => single("fig1e", RunKind::Psos, classical_base(3.0, 0.05, 200), false),
        "fig1f" => single("fig1f", RunKind::Psos, classical_base(4.0, 0.05, 200), false),

        // Mean-field stroboscopic series and spectra: order, quasiperiodic
        // breakdown, chaos.
        "fig2" => FigureRecipe {
            figure: "fig2",
            criterion_note: Some(
                "feeds acceptance criteria 4 and 5 (mean-field period doubling at JT=1, loss of dominance at JT=4)",
            ),
            quantum: false,
            runs: [1.0, 3.0, 4.0]
                .iter()
                .map(|&jt| FigureRun {
                    label: format!("fig2_jt{}", jt as u32),
                    kind: RunKind::MfEvolve,
                    config: classical_base(jt, 0.05, 1200),
                    with_spectrum: true,
                })
                .collect(),
        },

        // Mean-field δ-scans at four couplings.
        "fig3a" | "fig3b" | "fig3c" | "fig3d" => {
            let jt = match figure {
                "fig3a" => 1.0,
                "fig3b" => 2.0,
                "fig3c" => 0.0,
                _ => 5.0,
            };
            let mut config = classical_base(jt, 0.0, 1200);
            config.epsilon_t = None; // the scan sets δ per point
            config.lambda_t = None;
            let mut rec = single(
                figure,
                RunKind::ScanDelta(EngineKind::MeanField),
                config,
                false,
            );
            rec.criterion_note = Some(
                "feeds acceptance criterion 6 (δ-scan plateau at JT=1 vs collapse at JT=0)",
            );
            rec
        }

        // Quantum evolutions: ideal drive, imperfect uncoupled, imperfect
        // coupled.
        "fig4" => FigureRecipe {
            figure: "fig4",
            criterion_note: Some(
                "feeds acceptance criterion 7 (subharmonic dominance with coupling, splitting without)",
            ),
            quantum: true,
            runs: [
                ("fig4a", 0.0, 0.0),
                ("fig4b", 0.0, 0.05),
                ("fig4c", 0.5, 0.05),
            ]
            .iter()
            .map(|&(label, jt, delta)| FigureRun {
                label: label.to_string(),
                kind: RunKind::MpsEvolve,
                config: quantum_base(jt, delta, 30, 100),
                with_spectrum: true,
            })
            .collect(),
        },

        // Imperfection series at fixed coupling.
        "fig5" => FigureRecipe {
            figure: "fig5",
            criterion_note: Some(
                "feeds acceptance criterion 8 (side peaks at δ=0.13)",
            ),
            quantum: true,
            runs: [0.05f64, 0.09, 0.13, 0.15, 0.17, 0.19]
                .iter()
                .map(|&delta| FigureRun {
                    label: format!("fig5_d{:02}", (delta * 100.0).round() as u32),
                    kind: RunKind::MpsEvolve,
                    config: quantum_base(1.0, delta, 30, 100),
                    with_spectrum: true,
                })
                .collect(),
        },

        // Coupling series at fixed imperfection.
        "fig6" => FigureRecipe {
            figure: "fig6",
            criterion_note: None,
            quantum: true,
            runs: [0.1f64, 0.9, 1.5, 2.0]
                .iter()
                .map(|&jt| FigureRun {
                    label: format!("fig6_jt{}p{}", jt as u32, ((jt * 10.0).round() as u32) % 10),
                    kind: RunKind::MpsEvolve,
                    config: quantum_base(jt, 0.05, 30, 100),
                    with_spectrum: true,
                })
                .collect(),
        },

        // Size study of the decay-then-plateau shape.
        "fig7" => FigureRecipe {
            figure: "fig7",
            criterion_note: Some(
                "feeds acceptance criterion 9 (initial decay then plateau of the even-period magnetization)",
            ),
            quantum: true,
            runs: [30u32, 50, 80]
                .iter()
                .map(|&n| FigureRun {
                    label: format!("fig7_n{n}"),
                    kind: RunKind::MpsEvolve,
                    config: quantum_base(1.0, 0.05, n, 200),
                    with_spectrum: false,
                })
                .collect(),
        },

        other => return Err(Error::UnknownFigure(other.to_string())),
    };
    Ok(r)
}

/// Apply `--sites` / `--bond` overrides to a quantum recipe.
///
/// `sites` replaces N in every run, except for the size-study preset
/// (`fig7`), where it selects/creates the single member with that N.
/// `bond` replaces M everywhere.
pub fn apply_overrides(
    recipe: &mut FigureRecipe,
    sites: Option<u32>,
    bond: Option<u32>,
) -> Result<()> {
    if (sites.is_some() || bond.is_some()) && !recipe.quantum {
        return Err(Error::Config(format!(
            "`--sites`/`--bond` apply to quantum presets only; `{}` is classical",
            recipe.figure
        )));
    }
    if let Some(n) = sites {
        if n < 2 {
            return Err(Error::Config(format!("`--sites` must be ≥ 2, got {n}")));
        }
        if recipe.figure == "fig7" {
            let template = recipe.runs[0].clone();
            let mut run = template;
            run.label = format!("fig7_n{n}");
            run.config.n = Some(n);
            recipe.runs = vec![run];
        } else {
            for run in &mut recipe.runs {
                run.config.n = Some(n);
            }
        }
    }
    if let Some(m) = bond {
        if m < 1 {
            return Err(Error::Config("`--bond` must be ≥ 1".into()));
        }
        for run in &mut recipe.runs {
            run.config.m = Some(m);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_id_expands() {
        for id in figure_ids() {
            let r = recipe(id).unwrap();
            assert!(!r.runs.is_empty(), "{id} has no runs");
            for run in &r.runs {
                assert_eq!(run.config.t, Some(1.0));
            }
        }
    }

    #[test]
    fn unknown_id_is_rejected() {
        assert!(matches!(recipe("fig9"), Err(Error::UnknownFigure(_))));
    }

    #[test]
    fn fig1b_parameters_match_the_caption() {
        let r = recipe("fig1b").unwrap();
        let cfg = &r.runs[0].config;
        assert_eq!(r.runs[0].kind, RunKind::Psos);
        assert_eq!(cfg.j_t, Some(1.0));
        assert_eq!(cfg.epsilon_t, Some(0.05));
        assert_eq!(cfg.lambda_t, Some(0.05));
    }

    #[test]
    fn fig2_covers_three_couplings_with_spectra() {
        let r = recipe("fig2").unwrap();
        let jts: Vec<f64> = r.runs.iter().map(|x| x.config.j_t.unwrap()).collect();
        assert_eq!(jts, vec![1.0, 3.0, 4.0]);
        assert!(r.runs.iter().all(|x| x.with_spectrum));
        assert!(r.runs.iter().all(|x| x.config.n_periods == Some(1200)));
    }

    #[test]
    fn fig4_triple_and_overrides() {
        let mut r = recipe("fig4").unwrap();
        assert_eq!(r.runs.len(), 3);
        assert_eq!(r.runs[2].config.j_t, Some(0.5));
        apply_overrides(&mut r, Some(8), Some(16)).unwrap();
        for run in &r.runs {
            assert_eq!(run.config.n, Some(8));
            assert_eq!(run.config.m, Some(16));
        }
    }

    #[test]
    fn fig7_sites_override_selects_one_member() {
        let mut r = recipe("fig7").unwrap();
        assert_eq!(r.runs.len(), 3);
        apply_overrides(&mut r, Some(12), None).unwrap();
        assert_eq!(r.runs.len(), 1);
        assert_eq!(r.runs[0].label, "fig7_n12");
        assert_eq!(r.runs[0].config.n, Some(12));
        assert_eq!(r.runs[0].config.n_periods, Some(200));
    }

    #[test]
    fn classical_presets_reject_quantum_overrides() {
        let mut r = recipe("fig2").unwrap();
        assert!(apply_overrides(&mut r, Some(8), None).is_err());
    }

    #[test]
    fn scan_presets_leave_detuning_to_the_scan() {
        let r = recipe("fig3c").unwrap();
        assert_eq!(r.runs[0].kind, RunKind::ScanDelta(EngineKind::MeanField));
        assert_eq!(r.runs[0].config.j_t, Some(0.0));
        assert_eq!(r.runs[0].config.epsilon_t, None);
    }

    #[test]
    fn fig6_labels_encode_the_coupling() {
        let r = recipe("fig6").unwrap();
        let labels: Vec<&str> = r.runs.iter().map(|x| x.label.as_str()).collect();
        assert_eq!(labels, vec!["fig6_jt0p1", "fig6_jt0p9", "fig6_jt1p5", "fig6_jt2p0"]);
    }
}
