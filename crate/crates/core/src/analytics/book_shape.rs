//! Mean shape of the book: average resting volume against the distance from
//! the mid price, both sides aggregated for statistics.

use super::AnalyticsError;
use crate::matching_engine::DepthProfile;
use crate::numeric::Real;

/// Average the volume at each integer distance bucket over the snapshots.
/// Within one snapshot the two sides are summed; distances are rounded to
/// the nearest tick (half-tick distances round up).
pub fn average_book_shape<F: Real>(
    snapshots: &[DepthProfile],
) -> Result<Vec<(i64, F)>, AnalyticsError> {
    if snapshots.is_empty() {
        return Err(AnalyticsError::TooShort { needed: 1, got: 0 });
    }
    let mut totals: std::collections::BTreeMap<i64, F> = std::collections::BTreeMap::new();
    for profile in snapshots {
        for &(distance, volume) in profile.bid.iter().chain(&profile.ask) {
            let bucket = distance.round() as i64;
            let entry = totals.entry(bucket).or_insert_with(F::zero);
            *entry = *entry + F::from_i64(volume).expect("volume fits scalar");
        }
    }
    let n = F::from_len(snapshots.len());
    Ok(totals.into_iter().map(|(d, v)| (d, v / n)).collect())
}
