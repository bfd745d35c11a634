//! First-order detrended fluctuation analysis.

use serde::{Deserialize, Serialize};

use super::fit::{log_log_fit, LinearFit};
use crate::error::{Error, Result};

pub const MIN_DFA_LENGTH: usize = 1024;
const MIN_WINDOW: usize = 8;
const WINDOW_COUNT: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfaResult {
    pub hurst: f64,
    pub fit: LinearFit,
    pub window_sizes: Vec<usize>,
    pub fluctuations: Vec<f64>,
}

/// About 20 log-spaced distinct sizes from 8 to `len / 4`.
pub fn dfa_window_sizes(len: usize) -> Vec<usize> {
    let max = len / 4;
    if max < MIN_WINDOW {
        return Vec::new();
    }
    let (lo, hi) = ((MIN_WINDOW as f64).ln(), (max as f64).ln());
    let mut sizes: Vec<usize> = (0..WINDOW_COUNT)
        .map(|i| (lo + (hi - lo) * i as f64 / (WINDOW_COUNT - 1) as f64).exp().round() as usize)
        .collect();
    sizes.dedup();
    sizes
}

/// Root-mean-square residual of a linear fit in every complete window of
/// size `n` of the profile.
fn fluctuation(profile: &[f64], n: usize) -> f64 {
    let windows = profile.len() / n;
    let nf = n as f64;
    let x_mean = (nf - 1.0) / 2.0;
    let sxx: f64 = (0..n).map(|i| (i as f64 - x_mean).powi(2)).sum();
    let mut rss = 0.0;
    for w in profile.chunks_exact(n).take(windows) {
        let y_mean = w.iter().sum::<f64>() / nf;
        let sxy: f64 = w
            .iter()
            .enumerate()
            .map(|(i, y)| (i as f64 - x_mean) * (y - y_mean))
            .sum();
        let slope = sxy / sxx;
        rss += w
            .iter()
            .enumerate()
            .map(|(i, y)| {
                let r = y - y_mean - slope * (i as f64 - x_mean);
                r * r
            })
            .sum::<f64>();
    }
    (rss / (windows as f64 * nf)).sqrt()
}

pub fn dfa_with_windows(series: &[f64], windows: &[usize]) -> Result<DfaResult> {
    let n = series.len() as f64;
    let m = series.iter().sum::<f64>() / n;
    let first = series.first().copied().unwrap_or(0.0);
    if series.iter().all(|&v| v == first) {
        return Err(Error::DegenerateSeries("zero variance".into()));
    }
    if let Some(&w) = windows.iter().find(|&&w| w < 2 || w > series.len()) {
        return Err(Error::OutOfRange(format!(
            "window size {w} invalid for a series of length {}",
            series.len()
        )));
    }
    let mut acc = 0.0;
    let profile: Vec<f64> = series
        .iter()
        .map(|v| {
            acc += v - m;
            acc
        })
        .collect();
    let fluctuations: Vec<f64> = windows.iter().map(|&w| fluctuation(&profile, w)).collect();
    let sizes: Vec<f64> = windows.iter().map(|&w| w as f64).collect();
    let fit = log_log_fit(&sizes, &fluctuations)?;
    Ok(DfaResult {
        hurst: fit.slope,
        fit,
        window_sizes: windows.to_vec(),
        fluctuations,
    })
}

pub fn dfa_hurst(series: &[f64]) -> Result<DfaResult> {
    if series.len() < MIN_DFA_LENGTH {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: MIN_DFA_LENGTH,
        });
    }
    dfa_with_windows(series, &dfa_window_sizes(series.len()))
}
