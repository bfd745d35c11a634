//! Stylized-fact statistics for any uniformly sampled scalar series.

mod acf;
mod dfa;
mod fit;
mod kde;
mod moments;
mod multifractal;
mod report;
mod returns;

pub use acf::acf;
pub use dfa::{dfa_hurst, dfa_with_windows, dfa_window_sizes, DfaResult, MIN_DFA_LENGTH};
pub use fit::{linear_fit, LinearFit};
pub use kde::{
    default_peak_ks, kde_at, kde_at_zero, peak_scaling_exponent, silverman_bandwidth,
    PeakScaling, MIN_KDE_SAMPLES,
};
pub use moments::{
    erfc, excess_kurtosis, mean, pdf_with_gaussian_reference, population_variance,
    sample_std, tail_fraction, GaussianReference, Histogram, PdfReport,
};
pub use multifractal::{default_multifractal_ks, moment_ratio, multifractal_slope, DEFAULT_QS};
pub use report::{full_report, KurtosisEntry, ReportConfig, StatError, StatsReport, TailSummary};
pub use returns::{
    abs_returns, returns, standardize_by_mean, standardized_abs_returns,
    standardized_abs_returns_with, Normalization, ReturnSeries, ReturnVariant,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    #[default]
    Identity,
    /// Natural log applied on ingestion; raw values must be positive.
    Log,
}

/// A uniformly sampled series with all values finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSeries {
    pub values: Vec<f64>,
    pub label: String,
    pub transform: Transform,
}

impl SampledSeries {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        Self::from_raw(values, label, Transform::Identity)
    }

    /// Validates `raw` and applies `transform`.
    pub fn from_raw(raw: Vec<f64>, label: impl Into<String>, transform: Transform) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::SeriesTooShort {
                len: raw.len(),
                min: 2,
            });
        }
        if let Some(i) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::DegenerateSeries(format!(
                "non-finite value {} at index {i}",
                raw[i]
            )));
        }
        let values = match transform {
            Transform::Identity => raw,
            Transform::Log => {
                if let Some(i) = raw.iter().position(|&v| v <= 0.0) {
                    return Err(Error::DegenerateSeries(format!(
                        "log transform needs positive values, found {} at index {i}",
                        raw[i]
                    )));
                }
                raw.into_iter().map(f64::ln).collect()
            }
        };
        Ok(SampledSeries {
            values,
            label: label.into(),
            transform,
        })
    }

    pub(crate) fn new_unchecked(values: Vec<f64>, label: &str) -> Self {
        SampledSeries {
            values,
            label: label.to_string(),
            transform: Transform::Identity,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Contiguous sub-series `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.values.len() {
            return Err(Error::OutOfRange(format!(
                "slice {start}..{end} of a series of length {}",
                self.values.len()
            )));
        }
        Self::new(self.values[start..end].to_vec(), self.label.clone())
    }
}

impl AsRef<[f64]> for SampledSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_transform_on_ingestion() {
        let s = SampledSeries::from_raw(vec![1.0, std::f64::consts::E], "p", Transform::Log).unwrap();
        assert_eq!(s.values[0], 0.0);
        assert!((s.values[1] - 1.0).abs() < 1e-15);
        assert!(SampledSeries::from_raw(vec![1.0, 0.0], "p", Transform::Log).is_err());
    }

    #[test]
    fn rejects_short_and_non_finite() {
        assert!(SampledSeries::new(vec![1.0], "x").is_err());
        assert!(SampledSeries::new(vec![1.0, f64::NAN], "x").is_err());
    }
}
