//! Moment-based statistics.

use super::AnalyticsError;
use crate::numeric::{mean, Real};

/// Non-excess kurtosis `m4 / m2^2`; 3 for Gaussian data.
pub fn kurtosis<F: Real>(series: &[F]) -> Result<F, AnalyticsError> {
    if series.is_empty() {
        return Err(AnalyticsError::TooShort { needed: 1, got: 0 });
    }
    let m = mean(series);
    let mut m2 = F::zero();
    let mut m4 = F::zero();
    for &x in series {
        let d = x - m;
        let d2 = d * d;
        m2 = m2 + d2;
        m4 = m4 + d2 * d2;
    }
    let n = F::from_len(series.len());
    m2 = m2 / n;
    m4 = m4 / n;
    if m2 == F::zero() {
        return Err(AnalyticsError::ZeroVariance);
    }
    Ok(m4 / (m2 * m2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn gaussian_sample_is_mesokurtic() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let xs: Vec<f64> = (0..1_000_000)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let k = kurtosis(&xs).unwrap();
        assert!((k - 3.0).abs() < 0.05, "kurtosis {k}");
    }

    #[test]
    fn two_point_series_kurtosis_is_one() {
        let xs: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let k = kurtosis(&xs).unwrap();
        assert!((k - 1.0).abs() < 1e-12, "kurtosis {k}");
    }

    #[test]
    fn constant_series_is_error() {
        assert_eq!(
            kurtosis(&[5.0f64; 10]).unwrap_err(),
            AnalyticsError::ZeroVariance
        );
    }

    #[test]
    fn scale_and_location_invariance() {
        let xs = [0.3f64, -1.2, 2.2, 0.0, 0.7, -0.5, 1.9];
        let transformed: Vec<f64> = xs.iter().map(|x| -4.0 * x + 11.0).collect();
        let k0 = kurtosis(&xs).unwrap();
        let k1 = kurtosis(&transformed).unwrap();
        assert!((k0 - k1).abs() < 1e-9, "{k0} vs {k1}");
    }
}
