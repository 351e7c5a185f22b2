//! Instantaneous impact function: mean mid-price change per bin of signed
//! executed volume, rescaled by the maximum traded volume into [-1, 1].

use super::AnalyticsError;
use crate::numeric::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpactBin<F> {
    /// Bin centre in rescaled volume units.
    pub center: F,
    /// Mean mid change of the records in the bin (0 when empty).
    pub mean_change: F,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpactCurve<F> {
    pub bins: Vec<ImpactBin<F>>,
    /// The rescaling factor: largest absolute signed volume observed.
    pub max_volume: F,
}

impl<F: Real> ImpactCurve<F> {
    pub fn total_count(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }

    /// Bins that actually hold records.
    pub fn occupied(&self) -> impl Iterator<Item = &ImpactBin<F>> {
        self.bins.iter().filter(|b| b.count > 0)
    }
}

/// Bin `(signed volume, mid change)` records into `n_bins` equal-width cells
/// over [-1, 1] after rescaling volumes by the maximum absolute volume.
pub fn impact_function<F: Real>(
    records: &[(F, F)],
    n_bins: usize,
) -> Result<ImpactCurve<F>, AnalyticsError> {
    if records.is_empty() {
        return Err(AnalyticsError::TooShort { needed: 1, got: 0 });
    }
    if n_bins == 0 {
        return Err(AnalyticsError::InvalidParameter("n_bins must be positive"));
    }
    let max_volume = records
        .iter()
        .map(|&(v, _)| v.abs())
        .fold(F::zero(), F::max);
    if max_volume == F::zero() {
        return Err(AnalyticsError::InvalidParameter(
            "all signed volumes are zero",
        ));
    }
    let two = F::from_f64(2.0).unwrap();
    let width = two / F::from_len(n_bins);
    let mut sums = vec![F::zero(); n_bins];
    let mut counts = vec![0usize; n_bins];
    for &(volume, change) in records {
        let x = volume / max_volume;
        let idx = ((x + F::one()) / width)
            .to_usize()
            .unwrap_or(0)
            .min(n_bins - 1);
        sums[idx] = sums[idx] + change;
        counts[idx] += 1;
    }
    let bins = (0..n_bins)
        .map(|i| {
            let center = -F::one() + width * (F::from_len(i) + F::from_f64(0.5).unwrap());
            let count = counts[i];
            ImpactBin {
                center,
                mean_change: if count > 0 {
                    sums[i] / F::from_len(count)
                } else {
                    F::zero()
                },
                count,
            }
        })
        .collect();
    Ok(ImpactCurve { bins, max_volume })
}
