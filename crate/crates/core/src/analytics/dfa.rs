//! Detrended fluctuation analysis.
//!
//! The series is integrated into a mean-removed profile, split into
//! non-overlapping segments of each window size (scanning from both ends so
//! the tail is not discarded), each segment is detrended by a least-squares
//! line, and the RMS residual defines the fluctuation F(n). The Hurst
//! exponent is the slope of log F against log n. The standard error comes
//! from bootstrapping whole contiguous segments of the input series.

use rand::Rng;

use super::AnalyticsError;
use crate::numeric::{linear_fit, variance, Real};

const BOOTSTRAP_SEGMENTS: usize = 8;
const BOOTSTRAP_RESAMPLES: usize = 100;

/// A DFA estimate: the exponent, its bootstrap standard error and the
/// fluctuation curve the fit ran over.
#[derive(Debug, Clone, PartialEq)]
pub struct DfaResult<F> {
    pub hurst: F,
    pub stderr: F,
    /// `(window size, fluctuation)` pairs underlying the fit.
    pub fluctuations: Vec<(usize, F)>,
    /// Smallest and largest window size used.
    pub fit_range: (usize, usize),
}

/// Estimate the Hurst exponent of `series` over `n_windows` log-spaced
/// window sizes in `[min_window, max_window]`.
///
/// Requires `series.len() >= 4 * max_window`, window sizes of at least 4 and
/// a non-constant series.
pub fn dfa_hurst<F: Real, R: Rng>(
    series: &[F],
    min_window: usize,
    max_window: usize,
    n_windows: usize,
    rng: &mut R,
) -> Result<DfaResult<F>, AnalyticsError> {
    if min_window < 4 {
        return Err(AnalyticsError::InvalidParameter("min_window must be >= 4"));
    }
    if max_window <= min_window {
        return Err(AnalyticsError::InvalidParameter(
            "max_window must exceed min_window",
        ));
    }
    if n_windows < 2 {
        return Err(AnalyticsError::InvalidParameter("need at least 2 windows"));
    }
    if series.len() < 4 * max_window {
        return Err(AnalyticsError::TooShort {
            needed: 4 * max_window,
            got: series.len(),
        });
    }
    if variance(series) == F::zero() {
        return Err(AnalyticsError::ZeroVariance);
    }

    let windows = log_spaced_windows(min_window, max_window, n_windows);
    let (hurst, fluctuations) =
        hurst_estimate(series, &windows).expect("validated input has a finite estimate");

    // Bootstrap over whole contiguous segments of the original series.
    let seg_len = series.len() / BOOTSTRAP_SEGMENTS;
    let mut resampled = Vec::with_capacity(seg_len * BOOTSTRAP_SEGMENTS);
    let mut estimates = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    for _ in 0..BOOTSTRAP_RESAMPLES {
        resampled.clear();
        for _ in 0..BOOTSTRAP_SEGMENTS {
            let start = rng.random_range(0..BOOTSTRAP_SEGMENTS) * seg_len;
            resampled.extend_from_slice(&series[start..start + seg_len]);
        }
        if let Some((h, _)) = hurst_estimate(&resampled, &windows) {
            estimates.push(h);
        }
    }
    let stderr = crate::numeric::std_dev(&estimates);

    Ok(DfaResult {
        hurst,
        stderr,
        fluctuations,
        fit_range: (windows[0], *windows.last().expect("non-empty windows")),
    })
}

/// Core estimate; `None` when the profile is degenerate (all fluctuations
/// zero), which bootstrap resamples can hit on pathological input.
fn hurst_estimate<F: Real>(series: &[F], windows: &[usize]) -> Option<(F, Vec<(usize, F)>)> {
    let profile = integrate(series);
    let mut log_n = Vec::with_capacity(windows.len());
    let mut log_f = Vec::with_capacity(windows.len());
    let mut fluctuations = Vec::with_capacity(windows.len());
    for &window in windows {
        let f = fluctuation(&profile, window);
        if !(f > F::zero()) || !f.is_finite() {
            return None;
        }
        fluctuations.push((window, f));
        log_n.push(F::from_len(window).ln());
        log_f.push(f.ln());
    }
    let (slope, _) = linear_fit(&log_n, &log_f);
    Some((slope, fluctuations))
}

/// Cumulative sum of the mean-removed series.
fn integrate<F: Real>(series: &[F]) -> Vec<F> {
    let mean = crate::numeric::mean(series);
    let mut acc = F::zero();
    series
        .iter()
        .map(|&x| {
            acc = acc + (x - mean);
            acc
        })
        .collect()
}

/// RMS fluctuation over non-overlapping segments of `window` points, taken
/// from the front and the back of the profile.
fn fluctuation<F: Real>(profile: &[F], window: usize) -> F {
    let n_segments = profile.len() / window;
    let mut total = F::zero();
    for i in 0..n_segments {
        total = total + detrended_ms_residual(&profile[i * window..(i + 1) * window]);
        let end = profile.len() - i * window;
        total = total + detrended_ms_residual(&profile[end - window..end]);
    }
    (total / F::from_len(2 * n_segments)).sqrt()
}

/// Mean squared residual of a least-squares line through one segment.
fn detrended_ms_residual<F: Real>(segment: &[F]) -> F {
    let m = segment.len();
    let mf = F::from_len(m);
    // Closed-form sums over t = 0..m.
    let s_t = F::from_len(m * (m - 1) / 2);
    let s_tt = F::from_len(m * (m - 1) * (2 * m - 1) / 6);
    let mut s_y = F::zero();
    let mut s_ty = F::zero();
    for (t, &y) in segment.iter().enumerate() {
        s_y = s_y + y;
        s_ty = s_ty + F::from_len(t) * y;
    }
    let denom = mf * s_tt - s_t * s_t;
    let slope = (mf * s_ty - s_t * s_y) / denom;
    let intercept = (s_y - slope * s_t) / mf;
    let mut ms = F::zero();
    for (t, &y) in segment.iter().enumerate() {
        let r = y - intercept - slope * F::from_len(t);
        ms = ms + r * r;
    }
    ms / mf
}

/// Log-spaced, deduplicated integer window sizes.
fn log_spaced_windows(min: usize, max: usize, count: usize) -> Vec<usize> {
    let (lo, hi) = ((min as f64).ln(), (max as f64).ln());
    let mut windows: Vec<usize> = (0..count)
        .map(|i| {
            let f = i as f64 / (count - 1) as f64;
            (lo + f * (hi - lo)).exp().round() as usize
        })
        .collect();
    windows.dedup();
    windows
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn white_noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn window_grid_is_log_spaced() {
        let windows = log_spaced_windows(8, 4096, 10);
        assert_eq!(windows.first(), Some(&8));
        assert_eq!(windows.last(), Some(&4096));
        assert!(windows.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn white_noise_scales_at_one_half() {
        let series = white_noise(1 << 15, 42);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let result = dfa_hurst(&series, 8, series.len() / 8, 12, &mut rng).unwrap();
        assert!(
            (result.hurst - 0.5).abs() < 0.03,
            "H = {} +- {}",
            result.hurst,
            result.stderr
        );
        assert!(result.stderr > 0.0);
        assert!(result.fluctuations.len() >= 8);
    }

    #[test]
    fn integrated_noise_scales_at_three_halves() {
        let noise = white_noise(1 << 15, 43);
        let mut acc = 0.0;
        let series: Vec<f64> = noise
            .iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let result = dfa_hurst(&series, 8, series.len() / 8, 12, &mut rng).unwrap();
        assert!((result.hurst - 1.5).abs() < 0.05, "H = {}", result.hurst);
    }

    #[test]
    fn constant_series_is_error() {
        let series = vec![2.5f64; 4096];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(
            dfa_hurst(&series, 8, 256, 10, &mut rng).unwrap_err(),
            AnalyticsError::ZeroVariance
        );
    }

    #[test]
    fn short_series_is_error() {
        let series = white_noise(100, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(matches!(
            dfa_hurst(&series, 8, 256, 10, &mut rng).unwrap_err(),
            AnalyticsError::TooShort { .. }
        ));
    }

    #[test]
    fn shuffling_destroys_correlations() {
        // A strongly persistent series loses its memory under shuffling.
        let noise = white_noise(1 << 14, 45);
        let mut acc = 0.0;
        let mut series: Vec<f64> = noise
            .iter()
            .map(|x| {
                acc = 0.97 * acc + x;
                acc
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        use rand::seq::SliceRandom;
        series.shuffle(&mut rng);
        let result = dfa_hurst(&series, 8, series.len() / 8, 12, &mut rng).unwrap();
        assert!((result.hurst - 0.5).abs() < 0.05, "H = {}", result.hurst);
    }
}
