//! CSV writers and readers for the five artifact schemas.
//!
//! | artifact      | header                                        |
//! |---------------|-----------------------------------------------|
//! | PSOS          | `seed_P,seed_Q,n,P,Q`                         |
//! | stroboscopic  | `n,P,Q,sigma_y`                               |
//! | evolution     | `n,magnetization,cumulative_truncation_weight`|
//! | spectrum      | `omega_over_omega_drive,magnitude_sq`         |
//! | δ-scan        | `delta,peak`                                  |
//!
//! Floats are printed with 17 significant digits (`{:.16e}`), enough to
//! round-trip an `f64` exactly, so a re-run producing the same numbers
//! produces the same bytes. Evolution and stroboscopic files include the
//! `n = 0` initial sample; spectral analysis drops it on read.

use std::io::{BufRead, Write};

use crate::analysis::{PowerSpectrum, ScanCurve, StroboscopicSeries};
use crate::meanfield::{MfStroboscopic, PsosCloud};
use crate::{Error, Result};

/// One float, 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// `seed_P,seed_Q,n,P,Q`, seed-major, period-minor.
pub fn write_psos(w: &mut impl Write, cloud: &PsosCloud) -> std::io::Result<()> {
    writeln!(w, "seed_P,seed_Q,n,P,Q")?;
    for (seed, n, sample) in cloud.rows() {
        writeln!(
            w,
            "{},{},{n},{},{}",
            fmt_float(seed.p),
            fmt_float(seed.q),
            fmt_float(sample.p),
            fmt_float(sample.q)
        )?;
    }
    Ok(())
}

/// `n,P,Q,sigma_y`, one row per period boundary including `n = 0`.
pub fn write_stroboscopic(w: &mut impl Write, strobe: &MfStroboscopic) -> std::io::Result<()> {
    writeln!(w, "n,P,Q,sigma_y")?;
    for (n, (state, sy)) in strobe.states.iter().zip(&strobe.sigma_y).enumerate() {
        writeln!(
            w,
            "{n},{},{},{}",
            fmt_float(state.p),
            fmt_float(state.q),
            fmt_float(*sy)
        )?;
    }
    Ok(())
}

/// `n,magnetization,cumulative_truncation_weight`, rows `n = 0..𝒩`.
///
/// `cumulative` supplies the per-period truncation column; `None` (exact
/// engines) writes 0 for every row.
pub fn write_evolution(
    w: &mut impl Write,
    initial: f64,
    series: &StroboscopicSeries,
    cumulative: Option<&[f64]>,
) -> std::io::Result<()> {
    writeln!(w, "n,magnetization,cumulative_truncation_weight")?;
    writeln!(w, "0,{},{}", fmt_float(initial), fmt_float(0.0))?;
    for (i, v) in series.values().iter().enumerate() {
        let weight = cumulative.map_or(0.0, |c| c[i]);
        writeln!(w, "{},{},{}", i + 1, fmt_float(*v), fmt_float(weight))?;
    }
    Ok(())
}

/// `omega_over_omega_drive,magnitude_sq`, all 𝒩 bins in order.
pub fn write_spectrum(w: &mut impl Write, spectrum: &PowerSpectrum) -> std::io::Result<()> {
    writeln!(w, "omega_over_omega_drive,magnitude_sq")?;
    for (k, mag) in spectrum.magnitudes.iter().enumerate() {
        writeln!(
            w,
            "{},{}",
            fmt_float(spectrum.omega_over_drive(k)),
            fmt_float(*mag)
        )?;
    }
    Ok(())
}

/// `delta,peak`; a failed scan point writes `nan` for its peak.
pub fn write_scan(w: &mut impl Write, curve: &ScanCurve) -> std::io::Result<()> {
    writeln!(w, "delta,peak")?;
    for point in &curve.points {
        writeln!(
            w,
            "{},{}",
            fmt_float(point.delta),
            fmt_float(point.peak.unwrap_or(f64::NAN))
        )?;
    }
    Ok(())
}

/// A stroboscopic series read back from a CSV artifact.
#[derive(Debug, Clone)]
pub struct SeriesFile {
    /// Samples `n = 1..𝒩` ready for spectral analysis.
    pub series: StroboscopicSeries,
    /// The `n = 0` sample, when the file had one.
    pub initial: Option<f64>,
    /// Name of the value column that was read.
    pub column: String,
}

/// Read a stroboscopic series from any artifact CSV that has an `n` column
/// and one of the value columns `magnetization` / `sigma_y` / `value`.
///
/// Rows must be consecutive periods; a leading `n = 0` row is split off as
/// the initial sample. `period` sets the time scale of the returned series
/// (the spectrum's dimensionless `Ω/ω` axis does not depend on it).
pub fn read_series(reader: impl BufRead, period: f64) -> Result<SeriesFile> {
    const VALUE_COLUMNS: [&str; 3] = ["magnetization", "sigma_y", "value"];
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rd
        .headers()
        .map_err(|e| Error::Config(format!("reading csv header: {e}")))?
        .clone();
    let n_idx = headers
        .iter()
        .position(|h| h == "n")
        .ok_or_else(|| Error::Config("input csv has no `n` column".into()))?;
    let (v_idx, column) = VALUE_COLUMNS
        .iter()
        .find_map(|want| {
            headers
                .iter()
                .position(|h| h == *want)
                .map(|i| (i, want.to_string()))
        })
        .ok_or_else(|| {
            Error::Config(format!(
                "input csv has none of the value columns {VALUE_COLUMNS:?}"
            ))
        })?;

    let mut initial = None;
    let mut values = Vec::new();
    let mut expected_n = None;
    for (row, record) in rd.records().enumerate() {
        let record = record.map_err(|e| Error::Config(format!("reading csv row {row}: {e}")))?;
        let get = |idx: usize| -> Result<&str> {
            record
                .get(idx)
                .ok_or_else(|| Error::Config(format!("csv row {row} is too short")))
        };
        let n: u64 = get(n_idx)?
            .parse()
            .map_err(|e| Error::Config(format!("csv row {row}: bad `n`: {e}")))?;
        let v: f64 = get(v_idx)?
            .parse()
            .map_err(|e| Error::Config(format!("csv row {row}: bad `{column}`: {e}")))?;
        match expected_n {
            None => {
                if n == 0 {
                    initial = Some(v);
                    expected_n = Some(1);
                } else if n == 1 {
                    values.push(v);
                    expected_n = Some(2);
                } else {
                    return Err(Error::Config(format!(
                        "csv must start at period 0 or 1, got {n}"
                    )));
                }
            }
            Some(want) => {
                if n != want {
                    return Err(Error::Config(format!(
                        "csv periods must be consecutive: expected {want}, got {n}"
                    )));
                }
                values.push(v);
                expected_n = Some(want + 1);
            }
        }
    }
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(SeriesFile {
        series: StroboscopicSeries::new(values, period, column.clone())?,
        initial,
        column,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips_exactly() {
        for v in [
            0.0,
            1.0,
            -1.0,
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02e23,
            -2.2250738585072014e-308,
        ] {
            let s = fmt_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} -> {back}");
        }
    }

    #[test]
    fn evolution_round_trip() {
        let series =
            StroboscopicSeries::new(vec![0.5, -0.25, 0.125], 2.0, "magnetization mps").unwrap();
        let mut buf = Vec::new();
        write_evolution(&mut buf, 1.0, &series, Some(&[1e-9, 2e-9, 3e-9])).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,magnetization,cumulative_truncation_weight\n"));
        let file = read_series(&buf[..], 2.0).unwrap();
        assert_eq!(file.initial, Some(1.0));
        assert_eq!(file.column, "magnetization");
        assert_eq!(file.series.values(), &[0.5, -0.25, 0.125]);
        assert_eq!(file.series.period(), 2.0);
    }

    #[test]
    fn stroboscopic_csv_reads_back_sigma_y() {
        let text = "n,P,Q,sigma_y\n0,1.0,0.0,1.0\n1,2.0,0.0,-0.5\n2,3.0,0.0,0.25\n";
        let file = read_series(text.as_bytes(), 1.0).unwrap();
        assert_eq!(file.column, "sigma_y");
        assert_eq!(file.series.values(), &[-0.5, 0.25]);
        assert_eq!(file.initial, Some(1.0));
    }

    #[test]
    fn non_consecutive_periods_are_rejected() {
        let text = "n,magnetization,cumulative_truncation_weight\n0,1.0,0\n2,0.5,0\n";
        let err = read_series(text.as_bytes(), 1.0).unwrap_err();
        assert!(err.to_string().contains("consecutive"), "{err}");
    }

    #[test]
    fn missing_value_column_is_rejected() {
        let text = "n,foo\n1,1.0\n";
        let err = read_series(text.as_bytes(), 1.0).unwrap_err();
        assert!(err.to_string().contains("value columns"), "{err}");
    }

    #[test]
    fn series_without_initial_row_is_accepted() {
        let text = "n,value\n1,1.0\n2,-1.0\n";
        let file = read_series(text.as_bytes(), 1.0).unwrap();
        assert_eq!(file.initial, None);
        assert_eq!(file.series.values(), &[1.0, -1.0]);
    }

    #[test]
    fn scan_csv_writes_nan_for_failed_points() {
        use crate::analysis::{ScanCurve, ScanPoint};
        let curve = ScanCurve {
            points: vec![
                ScanPoint {
                    delta: 0.01,
                    peak: Some(0.9),
                    error: None,
                },
                ScanPoint {
                    delta: 0.02,
                    peak: None,
                    error: Some("boom".into()),
                },
            ],
            n_periods: 4,
        };
        let mut buf = Vec::new();
        write_scan(&mut buf, &curve).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(2).unwrap().ends_with("NaN") || text.contains("nan"));
    }
}
