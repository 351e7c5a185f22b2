//! Scalar abstraction and small numeric helpers shared by the estimators.

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the estimators and filters are generic over.
///
/// Implemented by `f32` and `f64` through the blanket impl.
pub trait Real: Float + FromPrimitive + ToPrimitive + Sum + Debug + Send + Sync + 'static {
    /// Lossless-enough conversion from `usize` for lengths and counts.
    fn from_len(n: usize) -> Self {
        Self::from_usize(n).expect("length representable in scalar type")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Send + Sync + 'static {}

/// Arithmetic mean. Empty input returns zero.
pub fn mean<F: Real>(values: &[F]) -> F {
    if values.is_empty() {
        return F::zero();
    }
    values.iter().copied().sum::<F>() / F::from_len(values.len())
}

/// Population variance (second central moment).
pub fn variance<F: Real>(values: &[F]) -> F {
    if values.is_empty() {
        return F::zero();
    }
    let m = mean(values);
    values
        .iter()
        .map(|&x| {
            let d = x - m;
            d * d
        })
        .sum::<F>()
        / F::from_len(values.len())
}

/// Population standard deviation.
pub fn std_dev<F: Real>(values: &[F]) -> F {
    variance(values).sqrt()
}

/// Ordinary least-squares line fit, returning `(slope, intercept)`.
///
/// Callers guarantee `x` and `y` have equal length >= 2 and `x` is not
/// constant; this is enforced with debug assertions only.
pub fn linear_fit<F: Real>(x: &[F], y: &[F]) -> (F, F) {
    debug_assert_eq!(x.len(), y.len());
    debug_assert!(x.len() >= 2);
    let n = F::from_len(x.len());
    let mx = mean(x);
    let my = mean(y);
    let mut sxx = F::zero();
    let mut sxy = F::zero();
    for (&xi, &yi) in x.iter().zip(y) {
        sxx = sxx + (xi - mx) * (xi - mx);
        sxy = sxy + (xi - mx) * (yi - my);
    }
    debug_assert!(sxx > F::zero(), "degenerate fit: constant abscissa");
    let _ = n;
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Weighted least-squares line fit, returning `(slope, intercept, r_squared)`.
pub fn weighted_linear_fit<F: Real>(x: &[F], y: &[F], w: &[F]) -> (F, F, F) {
    debug_assert_eq!(x.len(), y.len());
    debug_assert_eq!(x.len(), w.len());
    let wsum: F = w.iter().copied().sum();
    let mx = x.iter().zip(w).map(|(&xi, &wi)| xi * wi).sum::<F>() / wsum;
    let my = y.iter().zip(w).map(|(&yi, &wi)| yi * wi).sum::<F>() / wsum;
    let mut sxx = F::zero();
    let mut sxy = F::zero();
    let mut syy = F::zero();
    for ((&xi, &yi), &wi) in x.iter().zip(y).zip(w) {
        sxx = sxx + wi * (xi - mx) * (xi - mx);
        sxy = sxy + wi * (xi - mx) * (yi - my);
        syy = syy + wi * (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let ss_res = syy - slope * sxy;
    let r2 = if syy > F::zero() {
        F::one() - ss_res / syy
    } else {
        F::one()
    };
    (slope, my - slope * mx, r2)
}

/// Quantile of the standard normal distribution.
pub fn normal_quantile(q: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    Normal::new(0.0, 1.0)
        .expect("unit normal")
        .inverse_cdf(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mean_and_variance() {
        let xs = [1.0f64, 2.0, 3.0, 4.0];
        assert_relative_eq!(mean(&xs), 2.5);
        assert_relative_eq!(variance(&xs), 1.25);
    }

    #[test]
    fn fit_recovers_exact_line() {
        let x = [0.0f64, 1.0, 2.0, 3.0];
        let y = [1.0f64, 3.0, 5.0, 7.0];
        let (slope, icpt) = linear_fit(&x, &y);
        assert_relative_eq!(slope, 2.0, epsilon = 1e-12);
        assert_relative_eq!(icpt, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn weighted_fit_matches_unweighted_on_equal_weights() {
        let x = [0.0f64, 1.0, 2.0, 3.0];
        let y = [1.1f64, 2.9, 5.2, 6.8];
        let w = [1.0f64; 4];
        let (s0, i0) = linear_fit(&x, &y);
        let (s1, i1, r2) = weighted_linear_fit(&x, &y, &w);
        assert_relative_eq!(s0, s1, epsilon = 1e-12);
        assert_relative_eq!(i0, i1, epsilon = 1e-12);
        assert!(r2 > 0.99);
    }

    #[test]
    fn normal_quantile_known_values() {
        assert_relative_eq!(normal_quantile(0.5), 0.0, epsilon = 1e-9);
        assert_relative_eq!(normal_quantile(0.975), 1.959964, epsilon = 1e-5);
    }

    #[test]
    fn generic_over_f32() {
        let xs = [1.0f32, 2.0, 3.0];
        assert!((mean(&xs) - 2.0).abs() < 1e-6);
    }
}
