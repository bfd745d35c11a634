use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnVariant {
    Signed,
    Absolute,
    StandardizedAbsolute,
}

/// Denominator used when standardizing absolute returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Sum of `|R|` over the `N_T − k` available terms, divided by their count.
    #[default]
    MeanOverTerms,
    /// Same sum divided by the full series length `N_T`.
    SeriesLength,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub k: usize,
    pub values: Vec<f64>,
    pub variant: ReturnVariant,
}

fn check_lag(len: usize, k: usize) -> Result<()> {
    if k == 0 || k >= len {
        return Err(Error::OutOfRange(format!(
            "return lag k = {k} must satisfy 1 <= k < {len}"
        )));
    }
    Ok(())
}

/// `R[i] = Y[i + k] − Y[i]`.
pub fn returns(series: &[f64], k: usize) -> Result<ReturnSeries> {
    check_lag(series.len(), k)?;
    let values = series.iter().zip(&series[k..]).map(|(a, b)| b - a).collect();
    Ok(ReturnSeries {
        k,
        values,
        variant: ReturnVariant::Signed,
    })
}

pub fn abs_returns(series: &[f64], k: usize) -> Result<ReturnSeries> {
    let mut r = returns(series, k)?;
    r.values.iter_mut().for_each(|v| *v = v.abs());
    r.variant = ReturnVariant::Absolute;
    Ok(r)
}

/// Divides non-negative magnitudes by their arithmetic mean.
pub fn standardize_by_mean(magnitudes: &[f64]) -> Result<Vec<f64>> {
    let sum: f64 = magnitudes.iter().sum();
    if magnitudes.is_empty() || sum <= 0.0 {
        return Err(Error::DegenerateSeries("all returns are zero".into()));
    }
    let mean = sum / magnitudes.len() as f64;
    Ok(magnitudes.iter().map(|v| v / mean).collect())
}

pub fn standardized_abs_returns(series: &[f64], k: usize) -> Result<ReturnSeries> {
    standardized_abs_returns_with(series, k, Normalization::MeanOverTerms)
}

pub fn standardized_abs_returns_with(
    series: &[f64],
    k: usize,
    normalization: Normalization,
) -> Result<ReturnSeries> {
    let abs = abs_returns(series, k)?;
    let values = match normalization {
        Normalization::MeanOverTerms => standardize_by_mean(&abs.values)?,
        Normalization::SeriesLength => {
            let sum: f64 = abs.values.iter().sum();
            if sum <= 0.0 {
                return Err(Error::DegenerateSeries("all returns are zero".into()));
            }
            let denom = sum / series.len() as f64;
            abs.values.iter().map(|v| v / denom).collect()
        }
    };
    Ok(ReturnSeries {
        k,
        values,
        variant: ReturnVariant::StandardizedAbsolute,
    })
}
