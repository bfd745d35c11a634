//! Gaussian kernel density estimate with Silverman's bandwidth, and the
//! scaling of the return distribution's peak with the return horizon.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::fit::{log_log_fit, LinearFit};
use super::moments::sample_std;
use super::returns::returns;
use crate::error::{Error, Result};

pub const MIN_KDE_SAMPLES: usize = 10;

/// `1.06 σ̂ n^(−1/5)`
pub fn silverman_bandwidth(values: &[f64]) -> f64 {
    1.06 * sample_std(values) * (values.len() as f64).powf(-0.2)
}

pub fn kde_at(values: &[f64], x: f64) -> Result<f64> {
    if values.len() < MIN_KDE_SAMPLES {
        return Err(Error::SeriesTooShort {
            len: values.len(),
            min: MIN_KDE_SAMPLES,
        });
    }
    let h = silverman_bandwidth(values);
    if !(h > 0.0) {
        return Err(Error::DegenerateSeries("zero variance".into()));
    }
    let inv_h = 1.0 / h;
    let sum: f64 = values
        .iter()
        .map(|&v| {
            let z = (x - v) * inv_h;
            (-0.5 * z * z).exp()
        })
        .sum();
    Ok(sum / (values.len() as f64 * h * (2.0 * PI).sqrt()))
}

pub fn kde_at_zero(values: &[f64]) -> Result<f64> {
    kde_at(values, 0.0)
}

/// `k = 1, 6, 11, …, 101`.
pub fn default_peak_ks() -> Vec<usize> {
    (1..=101).step_by(5).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakScaling {
    /// Power-law exponent of `P(R = 0)` against `k`.
    pub alpha: f64,
    pub fit: LinearFit,
    pub ks: Vec<usize>,
    pub peaks: Vec<f64>,
}

pub fn peak_scaling_exponent(series: &[f64], ks: &[usize]) -> Result<PeakScaling> {
    let mut peaks = Vec::with_capacity(ks.len());
    for &k in ks {
        let r = returns(series, k)?;
        peaks.push(kde_at_zero(&r.values)?);
    }
    let x: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    let fit = log_log_fit(&x, &peaks)?;
    Ok(PeakScaling {
        alpha: fit.slope,
        fit,
        ks: ks.to_vec(),
        peaks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn normal(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Normal::new(0.0, 1.0).unwrap();
        (0..n).map(|_| d.sample(&mut rng)).collect()
    }

    #[test]
    fn standard_normal_at_zero() {
        let p = kde_at_zero(&normal(100_000, 1)).unwrap();
        assert!((p - 0.3989).abs() < 0.01, "{p}");
    }

    #[test]
    fn uniform_at_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v: Vec<f64> = (0..100_000).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = kde_at_zero(&v).unwrap();
        assert!((p - 0.5).abs() < 0.02, "{p}");
    }

    #[test]
    fn symmetric_sample_is_reflection_invariant() {
        let x = normal(500, 3);
        let sym: Vec<f64> = x.iter().copied().chain(x.iter().map(|v| -v)).collect();
        let mirrored: Vec<f64> = sym.iter().map(|v| -v).collect();
        let a = kde_at_zero(&sym).unwrap();
        assert!((kde_at_zero(&mirrored).unwrap() - a).abs() < 1e-12);
        for x0 in [0.3, 1.1, 2.5] {
            assert!((kde_at(&sym, x0).unwrap() - kde_at(&sym, -x0).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_divides_density() {
        let x = normal(2000, 4);
        let p = kde_at_zero(&x).unwrap();
        for a in [0.01, 3.0, -7.5] {
            let ax: Vec<f64> = x.iter().map(|v| a * v).collect();
            let q = kde_at_zero(&ax).unwrap();
            assert!((q - p / f64::abs(a)).abs() <= 1e-9 * q, "{a}");
        }
    }

    #[test]
    fn too_few_or_constant() {
        assert!(kde_at_zero(&[1.0; 5]).is_err());
        assert!(kde_at_zero(&[1.0; 20]).is_err());
    }

    #[test]
    fn brownian_peak_scaling() {
        let mut y = 0.0;
        let walk: Vec<f64> = normal(100_000, 5)
            .into_iter()
            .map(|e| {
                y += e;
                y
            })
            .collect();
        let s = peak_scaling_exponent(&walk, &default_peak_ks()).unwrap();
        assert!((s.alpha + 0.5).abs() < 0.05, "{}", s.alpha);
        assert_eq!(s.ks.len(), 21);
    }
}
