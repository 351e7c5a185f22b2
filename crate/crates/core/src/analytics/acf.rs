//! Sample autocorrelation and lag-0 cross-correlation.

use super::AnalyticsError;
use crate::numeric::{mean, Real};

/// Standard biased sample autocorrelation of the mean-removed series, for
/// lags `0..=max_lag`. `rho[0]` is 1 and every value lies in `[-1, 1]`.
pub fn autocorrelation<F: Real>(series: &[F], max_lag: usize) -> Result<Vec<F>, AnalyticsError> {
    if series.len() <= max_lag {
        return Err(AnalyticsError::TooShort {
            needed: max_lag + 1,
            got: series.len(),
        });
    }
    let m = mean(series);
    let denom: F = series
        .iter()
        .map(|&x| {
            let d = x - m;
            d * d
        })
        .sum();
    if denom == F::zero() {
        return Err(AnalyticsError::ZeroVariance);
    }
    let mut rho = Vec::with_capacity(max_lag + 1);
    for lag in 0..=max_lag {
        let mut num = F::zero();
        for t in 0..series.len() - lag {
            num = num + (series[t] - m) * (series[t + lag] - m);
        }
        rho.push(num / denom);
    }
    Ok(rho)
}

/// Pearson correlation coefficient at lag 0.
pub fn cross_correlation<F: Real>(a: &[F], b: &[F]) -> Result<F, AnalyticsError> {
    if a.len() != b.len() {
        return Err(AnalyticsError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(AnalyticsError::TooShort { needed: 1, got: 0 });
    }
    let (ma, mb) = (mean(a), mean(b));
    let mut saa = F::zero();
    let mut sbb = F::zero();
    let mut sab = F::zero();
    for (&x, &y) in a.iter().zip(b) {
        saa = saa + (x - ma) * (x - ma);
        sbb = sbb + (y - mb) * (y - mb);
        sab = sab + (x - ma) * (y - mb);
    }
    if saa == F::zero() || sbb == F::zero() {
        return Err(AnalyticsError::ZeroVariance);
    }
    Ok(sab / (saa * sbb).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rho_zero_is_one() {
        let xs = [1.0f64, 4.0, 2.0, -3.0, 0.5];
        let rho = autocorrelation(&xs, 2).unwrap();
        assert_eq!(rho[0], 1.0);
        assert!(rho.iter().all(|r| r.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn alternating_series_is_anticorrelated() {
        let n = 10_000;
        let xs: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let rho = autocorrelation(&xs, 1).unwrap();
        assert!((rho[1] + 1.0).abs() < 2.0 / n as f64, "rho(1) = {}", rho[1]);
    }

    #[test]
    fn white_noise_stays_inside_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let rho = autocorrelation(&xs, 20).unwrap();
        let band = 3.0 / (n as f64).sqrt();
        for (lag, r) in rho.iter().enumerate().skip(1) {
            assert!(r.abs() < band, "rho({lag}) = {r} out of band {band}");
        }
    }

    #[test]
    fn constant_series_is_error() {
        let xs = [3.0f64; 100];
        assert_eq!(
            autocorrelation(&xs, 3).unwrap_err(),
            AnalyticsError::ZeroVariance
        );
    }

    #[test]
    fn lag_must_fit() {
        let xs = [1.0f64, 2.0];
        assert!(matches!(
            autocorrelation(&xs, 5).unwrap_err(),
            AnalyticsError::TooShort { .. }
        ));
    }

    #[test]
    fn cross_correlation_extremes() {
        let a = [1.0f64, 2.0, -1.0, 4.0];
        let neg: Vec<f64> = a.iter().map(|x| -x).collect();
        assert!((cross_correlation(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!((cross_correlation(&a, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_noise_is_uncorrelated() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let n = 100_000;
        let a: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let r = cross_correlation(&a, &b).unwrap();
        assert!(r.abs() < 0.01, "r = {r}");
    }

    #[test]
    fn mismatched_lengths_error() {
        let a = [1.0f64, 2.0];
        let b = [1.0f64, 2.0, 3.0];
        assert_eq!(
            cross_correlation(&a, &b).unwrap_err(),
            AnalyticsError::LengthMismatch { left: 2, right: 3 }
        );
    }
}
