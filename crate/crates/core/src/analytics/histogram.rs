//! Normalised density histogram of a standardised series, with a unit
//! Gaussian reference at the same bin centres.

use super::AnalyticsError;
use crate::numeric::{mean, std_dev, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramPdf<F> {
    pub centers: Vec<F>,
    pub density: Vec<F>,
    /// Standard normal pdf evaluated at the centres; the matched-moment
    /// reference for the standardised data.
    pub gaussian: Vec<F>,
    pub bin_width: F,
}

impl<F: Real> HistogramPdf<F> {
    /// Riemann sum of the density; 1 up to rounding by construction.
    pub fn integral(&self) -> F {
        self.density.iter().copied().sum::<F>() * self.bin_width
    }
}

/// Standardise the series to zero mean and unit variance, then bin it into
/// `bins` equal-width cells spanning the data range.
pub fn histogram_pdf<F: Real>(series: &[F], bins: usize) -> Result<HistogramPdf<F>, AnalyticsError> {
    if bins == 0 {
        return Err(AnalyticsError::InvalidParameter("bins must be positive"));
    }
    if series.len() < 2 {
        return Err(AnalyticsError::TooShort {
            needed: 2,
            got: series.len(),
        });
    }
    let m = mean(series);
    let sd = std_dev(series);
    if sd == F::zero() {
        return Err(AnalyticsError::ZeroVariance);
    }
    let standardized: Vec<F> = series.iter().map(|&x| (x - m) / sd).collect();
    let lo = standardized.iter().copied().fold(F::infinity(), F::min);
    let hi = standardized.iter().copied().fold(F::neg_infinity(), F::max);
    let width = (hi - lo) / F::from_len(bins);

    let mut counts = vec![0usize; bins];
    for &z in &standardized {
        let idx = ((z - lo) / width).to_usize().unwrap_or(0).min(bins - 1);
        counts[idx] += 1;
    }

    let n = F::from_len(series.len());
    let half = F::from_f64(0.5).unwrap();
    let norm = F::from_f64(1.0 / (2.0 * std::f64::consts::PI).sqrt()).unwrap();
    let mut centers = Vec::with_capacity(bins);
    let mut density = Vec::with_capacity(bins);
    let mut gaussian = Vec::with_capacity(bins);
    for (i, &count) in counts.iter().enumerate() {
        let center = lo + width * (F::from_len(i) + half);
        centers.push(center);
        density.push(F::from_len(count) / (n * width));
        gaussian.push(norm * (-center * center * half).exp());
    }
    Ok(HistogramPdf {
        centers,
        density,
        gaussian,
        bin_width: width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn density_integrates_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let xs: Vec<f64> = (0..50_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let hist = histogram_pdf(&xs, 64).unwrap();
        assert!((hist.integral() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_sample_matches_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let xs: Vec<f64> = (0..200_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let hist = histogram_pdf(&xs, 40).unwrap();
        for ((&c, &d), &g) in hist
            .centers
            .iter()
            .zip(&hist.density)
            .zip(&hist.gaussian)
        {
            // Compare only where the reference has real mass.
            if c.abs() < 2.0 {
                assert!((d - g).abs() < 0.02, "center {c}: density {d} vs {g}");
            }
        }
    }

    #[test]
    fn near_delta_data_lands_in_one_bin() {
        // One outlier fixes the range; the rest piles into a single bin.
        let mut xs = vec![0.0f64; 999];
        xs.push(10.0);
        let hist = histogram_pdf(&xs, 10).unwrap();
        let max_mass = hist
            .density
            .iter()
            .map(|&d| d * hist.bin_width)
            .fold(0.0, f64::max);
        assert!((max_mass - 0.999).abs() < 1e-9);
        assert!((hist.integral() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn constant_series_is_error() {
        assert_eq!(
            histogram_pdf(&[1.0f64; 50], 10).unwrap_err(),
            AnalyticsError::ZeroVariance
        );
    }
}
