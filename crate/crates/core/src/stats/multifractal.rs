use super::fit::{log_log_fit, LinearFit};
use super::returns::abs_returns;
use crate::error::{Error, Result};

pub const DEFAULT_QS: [f64; 4] = [1.5, 2.0, 2.5, 3.0];

pub fn default_multifractal_ks() -> Vec<usize> {
    (1..=101).collect()
}

/// `⟨|R^k|^q⟩ / ⟨|R^k|⟩^q`.
pub fn moment_ratio(series: &[f64], k: usize, q: f64) -> Result<f64> {
    let abs = abs_returns(series, k)?;
    let n = abs.values.len() as f64;
    let first = abs.values.iter().sum::<f64>() / n;
    if first <= 0.0 {
        return Err(Error::DegenerateSeries(format!("all returns zero at k = {k}")));
    }
    if q == 1.0 {
        return Ok(1.0);
    }
    let qth = abs.values.iter().map(|v| v.powf(q)).sum::<f64>() / n;
    Ok(qth / first.powf(q))
}

/// Log-log slope of the moment ratio against `k`.
pub fn multifractal_slope(series: &[f64], q: f64, ks: &[usize]) -> Result<LinearFit> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::OutOfRange(format!("moment order q = {q} must be >= 1")));
    }
    let ratios = ks
        .iter()
        .map(|&k| moment_ratio(series, k, q))
        .collect::<Result<Vec<f64>>>()?;
    let x: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    log_log_fit(&x, &ratios)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn walk(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Normal::new(0.0, 1.0).unwrap();
        let mut y = 0.0;
        (0..n)
            .map(|_| {
                y += d.sample(&mut rng);
                y
            })
            .collect()
    }

    #[test]
    fn brownian_is_monofractal() {
        let w = walk(100_000, 1);
        let f = multifractal_slope(&w, 3.0, &default_multifractal_ks()).unwrap();
        assert!(f.slope.abs() < 0.05, "{}", f.slope);
    }

    #[test]
    fn first_moment_is_flat() {
        let w = walk(5_000, 2);
        let f = multifractal_slope(&w, 1.0, &default_multifractal_ks()).unwrap();
        assert_eq!(f.slope, 0.0);
    }

    #[test]
    fn affine_invariant() {
        let w = walk(5_000, 3);
        let aw: Vec<f64> = w.iter().map(|v| -4.0 * v + 17.0).collect();
        let ks: Vec<usize> = (1..=20).collect();
        let a = multifractal_slope(&w, 2.5, &ks).unwrap();
        let b = multifractal_slope(&aw, 2.5, &ks).unwrap();
        assert!((a.slope - b.slope).abs() < 1e-9);
    }

    #[test]
    fn constant_series_is_degenerate() {
        assert!(multifractal_slope(&[2.0; 300], 2.0, &[1, 2, 3]).is_err());
    }
}
