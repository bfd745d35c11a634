//! One-shot computation of every stylized-fact statistic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::acf::acf;
use super::dfa::{dfa_hurst, DfaResult};
use super::kde::{default_peak_ks, peak_scaling_exponent, PeakScaling};
use super::moments::{excess_kurtosis, pdf_with_gaussian_reference, tail_fraction, PdfReport};
use super::multifractal::{default_multifractal_ks, multifractal_slope, DEFAULT_QS};
use super::returns::{abs_returns, returns, standardized_abs_returns, Normalization};
use super::SampledSeries;
use crate::error::Result;
use crate::stats::fit::LinearFit;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub max_lag: usize,
    pub kurtosis_ks: Vec<usize>,
    pub peak_ks: Vec<usize>,
    pub multifractal_qs: Vec<f64>,
    pub multifractal_ks: Vec<usize>,
    pub pdf_bins: usize,
    pub tail_threshold: f64,
    pub normalization: Normalization,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            max_lag: 400,
            kurtosis_ks: vec![1, 10, 100],
            peak_ks: default_peak_ks(),
            multifractal_qs: DEFAULT_QS.to_vec(),
            multifractal_ks: default_multifractal_ks(),
            pdf_bins: 80,
            tail_threshold: 4.0,
            normalization: Normalization::MeanOverTerms,
        }
    }
}

/// Excess kurtosis of the return distribution at one horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KurtosisEntry {
    /// Of the standardized absolute returns; the primary aggregational
    /// Gaussianity measure.
    pub standardized_abs: Option<f64>,
    pub signed: Option<f64>,
}

/// Observed vs matched-Gaussian mass above a threshold of `|R̂|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSummary {
    pub threshold: f64,
    pub empirical: f64,
    pub gaussian: f64,
}

impl TailSummary {
    pub fn excess_ratio(&self) -> f64 {
        self.empirical / self.gaussian
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatError {
    pub statistic: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub label: String,
    pub n_points: usize,
    pub acf_return: Option<Vec<f64>>,
    pub acf_abs_return: Option<Vec<f64>>,
    /// Keyed by `k`.
    pub kurtosis_by_k: BTreeMap<String, KurtosisEntry>,
    pub peak_scaling_alpha: Option<PeakScaling>,
    /// Keyed by `q`.
    pub multifractal_slopes: BTreeMap<String, LinearFit>,
    /// DFA of the absolute return series.
    #[serde(rename = "hurst_H")]
    pub hurst: Option<DfaResult>,
    /// Distribution of the standardized absolute returns at `k = 1`.
    pub pdf: Option<PdfReport>,
    pub tail: Option<TailSummary>,
    pub errors: Vec<StatError>,
}

impl StatsReport {
    pub fn kurtosis_at(&self, k: usize) -> Option<KurtosisEntry> {
        self.kurtosis_by_k.get(&k.to_string()).copied()
    }

    pub fn multifractal_at(&self, q: f64) -> Option<LinearFit> {
        self.multifractal_slopes.get(&q.to_string()).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Collector {
    errors: Vec<StatError>,
}

impl Collector {
    fn keep<T>(&mut self, statistic: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(StatError {
                    statistic: statistic.to_string(),
                    message: e.to_string(),
                });
                None
            }
        }
    }
}

/// Runs every statistic; a failing statistic is recorded in `errors` and
/// leaves its field empty without stopping the others.
pub fn full_report(series: &SampledSeries, config: &ReportConfig) -> StatsReport {
    let y = &series.values;
    let mut c = Collector { errors: Vec::new() };
    let max_lag = config.max_lag.min(y.len().saturating_sub(2));

    let signed = c.keep("returns", returns(y, 1));
    let abs = c.keep("abs_returns", abs_returns(y, 1));

    let acf_return = signed
        .as_ref()
        .and_then(|r| c.keep("acf_return", acf(&r.values, max_lag)));
    let acf_abs_return = abs
        .as_ref()
        .and_then(|r| c.keep("acf_abs_return", acf(&r.values, max_lag)));

    let mut kurtosis_by_k = BTreeMap::new();
    for &k in &config.kurtosis_ks {
        let standardized_abs = c.keep(
            &format!("kurtosis_standardized_abs[k={k}]"),
            super::returns::standardized_abs_returns_with(y, k, config.normalization)
                .and_then(|r| excess_kurtosis(&r.values)),
        );
        let signed = c.keep(
            &format!("kurtosis_signed[k={k}]"),
            returns(y, k).and_then(|r| excess_kurtosis(&r.values)),
        );
        kurtosis_by_k.insert(
            k.to_string(),
            KurtosisEntry {
                standardized_abs,
                signed,
            },
        );
    }

    let peak_scaling_alpha = c.keep("peak_scaling", peak_scaling_exponent(y, &config.peak_ks));

    let mut multifractal_slopes = BTreeMap::new();
    for &q in &config.multifractal_qs {
        if let Some(f) = c.keep(
            &format!("multifractal[q={q}]"),
            multifractal_slope(y, q, &config.multifractal_ks),
        ) {
            multifractal_slopes.insert(q.to_string(), f);
        }
    }

    let hurst = abs
        .as_ref()
        .and_then(|r| c.keep("hurst", dfa_hurst(&r.values)));

    let standardized = c.keep("standardized_abs_returns", standardized_abs_returns(y, 1));
    let pdf = standardized.as_ref().and_then(|r| {
        c.keep("pdf", pdf_with_gaussian_reference(&r.values, config.pdf_bins))
    });
    let tail = match (&standardized, &pdf) {
        (Some(r), Some(p)) => Some(TailSummary {
            threshold: config.tail_threshold,
            empirical: tail_fraction(&r.values, config.tail_threshold),
            gaussian: p.gaussian.upper_tail(config.tail_threshold),
        }),
        _ => None,
    };

    StatsReport {
        label: series.label.clone(),
        n_points: y.len(),
        acf_return,
        acf_abs_return,
        kurtosis_by_k,
        peak_scaling_alpha,
        multifractal_slopes,
        hurst,
        pdf,
        tail,
        errors: c.errors,
    }
}
