use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Second central moment (divides by `n`).
pub fn population_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64
}

/// Unbiased standard deviation (divides by `n − 1`).
pub fn sample_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    (population_variance(values) * n / (n - 1.0)).sqrt()
}

fn require_variance(values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::SeriesTooShort {
            len: values.len(),
            min: 2,
        });
    }
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return Err(Error::DegenerateSeries("zero variance".into()));
    }
    Ok(())
}

/// `m4 / m2² − 3` from sample central moments.
pub fn excess_kurtosis(values: &[f64]) -> Result<f64> {
    require_variance(values)?;
    let m = mean(values);
    let (mut m2, mut m4) = (0.0, 0.0);
    for &v in values {
        let d2 = (v - m) * (v - m);
        m2 += d2;
        m4 += d2 * d2;
    }
    let n = values.len() as f64;
    m2 /= n;
    m4 /= n;
    Ok(m4 / (m2 * m2) - 3.0)
}

/// Complementary error function, Chebyshev fit with relative error below
/// 1.2e-7 everywhere.
pub fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let poly = -z * z - 1.265_512_23
        + t * (1.000_023_68
            + t * (0.374_091_96
                + t * (0.096_784_18
                    + t * (-0.186_288_06
                        + t * (0.278_868_07
                            + t * (-1.135_203_98
                                + t * (1.488_515_87 + t * (-0.822_152_23 + t * 0.170_872_77))))))));
    let r = t * poly.exp();
    if x >= 0.0 {
        r
    } else {
        2.0 - r
    }
}

/// Moment-matched normal distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianReference {
    pub mean: f64,
    pub std: f64,
}

impl GaussianReference {
    pub fn fit(values: &[f64]) -> Result<Self> {
        require_variance(values)?;
        Ok(GaussianReference {
            mean: mean(values),
            std: sample_std(values),
        })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.std;
        (-0.5 * z * z).exp() / (self.std * (2.0 * std::f64::consts::PI).sqrt())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        0.5 * erfc(-(x - self.mean) / (self.std * std::f64::consts::SQRT_2))
    }

    /// `P(X > x)`.
    pub fn upper_tail(&self, x: f64) -> f64 {
        0.5 * erfc((x - self.mean) / (self.std * std::f64::consts::SQRT_2))
    }
}

/// Equal-width histogram normalized as a density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn new(values: &[f64], bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::OutOfRange("histogram needs at least one bin".into()));
        }
        require_variance(values)?;
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0u64; bins];
        for &v in values {
            let b = (((v - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
        let n = values.len() as f64;
        let density = counts.iter().map(|&c| c as f64 / (n * width)).collect();
        Ok(Histogram {
            edges,
            counts,
            density,
        })
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn bin_width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdfReport {
    pub histogram: Histogram,
    pub gaussian: GaussianReference,
}

pub fn pdf_with_gaussian_reference(values: &[f64], bins: usize) -> Result<PdfReport> {
    Ok(PdfReport {
        histogram: Histogram::new(values, bins)?,
        gaussian: GaussianReference::fit(values)?,
    })
}

/// Fraction of values strictly above `threshold`.
pub fn tail_fraction(values: &[f64], threshold: f64) -> f64 {
    values.iter().filter(|&&v| v > threshold).count() as f64 / values.len() as f64
}
