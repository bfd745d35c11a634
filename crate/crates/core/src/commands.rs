//! The `simulate`, `analyze` and `sweep` commands, independent of argument
//! parsing so they can be driven from tests.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Individualism, SimConfig};
use crate::dynamics::{run, RunOutput};
use crate::error::{Error, Result};
use crate::ingest::{ingest, IngestSpec};
use crate::regime::{classify_regime, split_means, Regime, RegimeThresholds};
use crate::stats::{abs_returns, acf, dfa_hurst, full_report, ReportConfig, StatsReport};

pub const MIN_ANALYZE_ROWS: usize = 1024;

/// Column order of the sweep summary CSV.
pub const SWEEP_COLUMNS: [&str; 11] = [
    "T",
    "seed",
    "regime",
    "episodes",
    "saturated_share",
    "rho_mean_in",
    "rho_mean_out",
    "hurst_abs_r",
    "acf_abs_r_10",
    "acf_abs_r_100",
    "error",
];

pub fn load_config(path: Option<&Path>) -> Result<SimConfig> {
    match path {
        Some(p) => SimConfig::from_path(p),
        None => Ok(SimConfig::default()),
    }
}

/// `out.csv` → `out.events.csv`.
pub fn events_path_for(samples: &Path) -> PathBuf {
    let stem = samples
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    samples.with_file_name(format!("{stem}.events.csv"))
}

pub fn cmd_simulate(config: &SimConfig, samples: &Path, events: &Path) -> Result<RunOutput> {
    let output = run(config)?;
    output.write_samples_csv(BufWriter::new(File::create(samples)?))?;
    output.write_events_csv(BufWriter::new(File::create(events)?))?;
    Ok(output)
}

pub fn cmd_analyze(spec: &IngestSpec, report_path: &Path) -> Result<StatsReport> {
    let series = ingest(spec)?;
    if series.len() < MIN_ANALYZE_ROWS {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: MIN_ANALYZE_ROWS,
        });
    }
    let first = series.values[0];
    if series.values.iter().all(|&v| v == first) {
        return Err(Error::DegenerateSeries(format!(
            "column `{}` is constant",
            series.label
        )));
    }
    let report = full_report(&series, &ReportConfig::default());
    let mut w = BufWriter::new(File::create(report_path)?);
    w.write_all(report.to_json().as_bytes())?;
    w.flush()?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub individualism: Individualism,
    pub seed: u64,
    pub regime: Option<Regime>,
    pub episodes: usize,
    pub saturated_share: Option<f64>,
    pub rho_mean_in: Option<f64>,
    pub rho_mean_out: Option<f64>,
    pub hurst_abs_r: Option<f64>,
    pub acf_abs_r_10: Option<f64>,
    pub acf_abs_r_100: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(individualism: Individualism, seed: u64, e: &Error) -> Self {
        SweepRow {
            individualism,
            seed,
            regime: None,
            episodes: 0,
            saturated_share: None,
            rho_mean_in: None,
            rho_mean_out: None,
            hurst_abs_r: None,
            acf_abs_r_10: None,
            acf_abs_r_100: None,
            error: Some(e.to_string()),
        }
    }

    fn record(&self) -> Vec<String> {
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.individualism.to_string(),
            self.seed.to_string(),
            self.regime.map(|r| r.to_string()).unwrap_or_default(),
            self.episodes.to_string(),
            num(self.saturated_share),
            num(self.rho_mean_in),
            num(self.rho_mean_out),
            num(self.hurst_abs_r),
            num(self.acf_abs_r_10),
            num(self.acf_abs_r_100),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Regime label and volatility summary of one finished run.
pub fn summarize_run(
    individualism: Individualism,
    seed: u64,
    output: &RunOutput,
    thresholds: &RegimeThresholds,
) -> SweepRow {
    let class = classify_regime(&output.fraction.values, thresholds);
    let (rho_mean_in, rho_mean_out) = split_means(&output.density.values, &class);
    let covered: usize = class.saturation_episodes.iter().map(|e| e.len()).sum();
    let abs = abs_returns(&output.density.values, 1).ok();
    let hurst_abs_r = abs
        .as_ref()
        .and_then(|r| dfa_hurst(&r.values).ok())
        .map(|d| d.hurst);
    let acf_abs = abs.as_ref().and_then(|r| acf(&r.values, 100).ok());
    SweepRow {
        individualism,
        seed,
        regime: Some(class.regime),
        episodes: class.saturation_episodes.len(),
        saturated_share: Some(covered as f64 / output.len().max(1) as f64),
        rho_mean_in,
        rho_mean_out,
        hurst_abs_r,
        acf_abs_r_10: acf_abs.as_ref().map(|a| a[10]),
        acf_abs_r_100: acf_abs.as_ref().map(|a| a[100]),
        error: None,
    }
}

/// Runs `runs` seeds (`seed_base + i`) for every value of `T`. Rows come back
/// in `(T, seed)` order whatever order the runs finish in.
pub fn sweep(
    base: &SimConfig,
    values: &[Individualism],
    runs: usize,
    seed_base: u64,
    thresholds: &RegimeThresholds,
) -> Vec<SweepRow> {
    let jobs: Vec<(Individualism, u64)> = values
        .iter()
        .flat_map(|&t| (0..runs as u64).map(move |i| (t, seed_base.wrapping_add(i))))
        .collect();
    jobs.par_iter()
        .map(|&(t, seed)| {
            let config = SimConfig {
                individualism: Some(t),
                seed,
                ..base.clone()
            };
            match run(&config) {
                Ok(out) => summarize_run(t, seed, &out, thresholds),
                Err(e) => SweepRow::failed(t, seed, &e),
            }
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_COLUMNS)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_sweep(
    base: &SimConfig,
    values: &[Individualism],
    runs: usize,
    seed_base: u64,
    out: &Path,
) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::OutOfRange("sweep needs at least one T value".into()));
    }
    if runs == 0 {
        return Err(Error::OutOfRange("--runs must be positive".into()));
    }
    let rows = sweep(base, values, runs, seed_base, &RegimeThresholds::default());
    write_sweep_csv(&rows, BufWriter::new(File::create(out)?))?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn events_path_naming() {
        assert_eq!(
            events_path_for(Path::new("/tmp/out/run.csv")),
            PathBuf::from("/tmp/out/run.events.csv")
        );
    }

    #[test]
    fn failed_row_keeps_columns() {
        let r = SweepRow::failed(Individualism::Finite(0.1), 3, &Error::CoincidentAgent);
        let rec = r.record();
        assert_eq!(rec.len(), SWEEP_COLUMNS.len());
        assert_eq!(rec[0], "0.1");
        assert!(!rec[10].is_empty());
    }
}
