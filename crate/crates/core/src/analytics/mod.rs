//! Estimators for the simulated series: Hurst exponents via detrended
//! fluctuation analysis, autocorrelation, kurtosis, impact curves, the
//! average book shape, density histograms and block-bootstrap errors.
//!
//! All estimators are pure functions over slices, generic over the scalar
//! type through [`crate::numeric::Real`]. Each one emits plot-ready data the
//! CLI serialises as `x,y[,stderr]` CSV blocks.

mod acf;
mod book_shape;
mod bootstrap;
mod dfa;
mod histogram;
mod impact;
mod moments;

pub use acf::{autocorrelation, cross_correlation};
pub use book_shape::average_book_shape;
pub use bootstrap::{bootstrap_error, DEFAULT_BLOCK, DEFAULT_RESAMPLES};
pub use dfa::{dfa_hurst, DfaResult};
pub use histogram::{histogram_pdf, HistogramPdf};
pub use impact::{impact_function, ImpactBin, ImpactCurve};
pub use moments::kurtosis;

use thiserror::Error;

use crate::numeric::Real;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyticsError {
    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// A labelled, ordered series of real values.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<F> {
    pub label: String,
    pub values: Vec<F>,
}

impl<F: Real> Series<F> {
    pub fn new(label: impl Into<String>, values: Vec<F>) -> Self {
        Series {
            label: label.into(),
            values,
        }
    }

    pub fn as_slice(&self) -> &[F] {
        &self.values
    }
}

/// Subsequence of nonzero entries, order preserved. Used for the H0 variants
/// of the Hurst estimates.
pub fn remove_zeros<F: Real>(series: &[F]) -> Vec<F> {
    series.iter().copied().filter(|x| *x != F::zero()).collect()
}

/// Mean and naive standard error of independent per-run estimates.
pub fn pool_estimates<F: Real>(values: &[F]) -> (F, F) {
    let m = crate::numeric::mean(values);
    if values.len() < 2 {
        return (m, F::zero());
    }
    let stderr = crate::numeric::std_dev(values) / F::from_len(values.len()).sqrt();
    (m, stderr)
}

/// The +-3/sqrt(n) white-noise significance band for an ACF estimate.
pub fn noise_band<F: Real>(n: usize) -> F {
    F::from_f64(3.0).unwrap() / F::from_len(n).sqrt()
}
