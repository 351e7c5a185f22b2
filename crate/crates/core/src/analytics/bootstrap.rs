//! Non-overlapping block bootstrap for standard errors of serially
//! dependent series.

use rand::Rng;

use super::AnalyticsError;
use crate::numeric::{std_dev, Real};

/// Default block length for the simulated series.
pub const DEFAULT_BLOCK: usize = 256;
/// Default resample count.
pub const DEFAULT_RESAMPLES: usize = 200;

/// Standard deviation of `estimator` over `n_resamples` block resamples.
///
/// The series is split into non-overlapping blocks of `block_length` (a
/// trailing partial block is dropped); each resample concatenates that many
/// blocks drawn with replacement, preserving serial dependence inside
/// blocks.
pub fn bootstrap_error<F, R, E>(
    estimator: E,
    series: &[F],
    n_resamples: usize,
    block_length: usize,
    rng: &mut R,
) -> Result<F, AnalyticsError>
where
    F: Real,
    R: Rng,
    E: Fn(&[F]) -> F,
{
    if block_length == 0 {
        return Err(AnalyticsError::InvalidParameter(
            "block_length must be positive",
        ));
    }
    if n_resamples == 0 {
        return Err(AnalyticsError::InvalidParameter(
            "n_resamples must be positive",
        ));
    }
    if series.len() < block_length {
        return Err(AnalyticsError::TooShort {
            needed: block_length,
            got: series.len(),
        });
    }
    let n_blocks = series.len() / block_length;
    let mut estimates = Vec::with_capacity(n_resamples);
    let mut resample = Vec::with_capacity(n_blocks * block_length);
    for _ in 0..n_resamples {
        resample.clear();
        for _ in 0..n_blocks {
            let start = rng.random_range(0..n_blocks) * block_length;
            resample.extend_from_slice(&series[start..start + block_length]);
        }
        estimates.push(estimator(&resample));
    }
    Ok(std_dev(&estimates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::mean;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn mean_stderr_of_independent_data_is_classical() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 16_384;
        let xs: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let stderr = bootstrap_error(mean, &xs, 200, 16, &mut rng).unwrap();
        let classical = crate::numeric::std_dev(&xs) / (n as f64).sqrt();
        assert!(
            (stderr - classical).abs() / classical < 0.2,
            "bootstrap {stderr} vs classical {classical}"
        );
    }

    #[test]
    fn doubling_resamples_is_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let xs: Vec<f64> = (0..8192).map(|_| StandardNormal.sample(&mut rng)).collect();
        let a = bootstrap_error(mean, &xs, 200, 64, &mut rng).unwrap();
        let b = bootstrap_error(mean, &xs, 400, 64, &mut rng).unwrap();
        assert!((a - b).abs() / a < 0.3, "{a} vs {b}");
    }

    #[test]
    fn constant_series_has_zero_stderr() {
        let xs = vec![4.0f64; 1024];
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let stderr = bootstrap_error(mean, &xs, 100, 32, &mut rng).unwrap();
        assert_eq!(stderr, 0.0);
    }

    #[test]
    fn series_shorter_than_block_is_error() {
        let xs = vec![1.0f64; 10];
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        assert!(matches!(
            bootstrap_error(mean, &xs, 100, 32, &mut rng).unwrap_err(),
            AnalyticsError::TooShort { .. }
        ));
    }
}
