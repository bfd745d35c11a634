use crate::error::{Error, Result};

/// Biased sample autocorrelation for lags `0..=max_lag`:
/// `Σ (x_t − x̄)(x_{t+ℓ} − x̄) / Σ (x_t − x̄)²`.
pub fn acf(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if max_lag >= n {
        return Err(Error::OutOfRange(format!(
            "max_lag {max_lag} must be below the series length {n}"
        )));
    }
    let m = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|v| v - m).collect();
    let denom: f64 = centered.iter().map(|v| v * v).sum();
    if denom <= 0.0 {
        return Err(Error::DegenerateSeries("zero variance".into()));
    }
    let out = (0..=max_lag)
        .map(|lag| {
            let num: f64 = centered
                .iter()
                .zip(&centered[lag..])
                .map(|(a, b)| a * b)
                .sum();
            num / denom
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn lag_zero_is_one() {
        let r = acf(&[1.0, 4.0, 2.0, 8.0, 5.0], 3).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn white_noise_is_uncorrelated() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let d = Normal::new(0.0, 1.0).unwrap();
        let x: Vec<f64> = (0..10_000).map(|_| d.sample(&mut rng)).collect();
        let r = acf(&x, 50).unwrap();
        assert!(r[1..].iter().all(|v| v.abs() < 0.03), "{r:?}");
    }

    #[test]
    fn ar1_lag_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = Normal::new(0.0, 1.0).unwrap();
        let mut x = vec![0.0f64; 100_000];
        for t in 1..x.len() {
            x[t] = 0.6 * x[t - 1] + d.sample(&mut rng);
        }
        let r = acf(&x, 2).unwrap();
        assert!((r[1] - 0.6).abs() < 0.01, "{}", r[1]);
    }

    #[test]
    fn errors() {
        assert!(acf(&[1.0; 10], 2).is_err());
        assert!(acf(&[1.0, 2.0], 2).is_err());
    }

    proptest! {
        #[test]
        fn affine_and_reversal_invariant(
            x in prop::collection::vec(-10f64..10.0, 20..80),
            a in prop_oneof![-3f64..-0.2, 0.2f64..3.0],
            c in -10f64..10.0,
        ) {
            let base = match acf(&x, 5) { Ok(r) => r, Err(_) => return Ok(()) };
            let ax: Vec<f64> = x.iter().map(|v| a * v + c).collect();
            let rev: Vec<f64> = x.iter().rev().copied().collect();
            for (p, q) in base.iter().zip(acf(&ax, 5).unwrap()) {
                prop_assert!((p - q).abs() < 1e-9);
            }
            for (p, q) in base.iter().zip(acf(&rev, 5).unwrap()) {
                prop_assert!((p - q).abs() < 1e-9);
            }
        }
    }
}
