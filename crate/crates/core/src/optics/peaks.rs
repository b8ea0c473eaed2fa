//! Ridge extraction from transmission maps.
//!
//! Peaks are strict local maxima (plateaus count once, at their left edge)
//! whose topographic prominence reaches a fraction of the column's dynamic
//! range. Positions are refined with the vertex of the parabola through the
//! maximum and its two neighbours.

use super::map::TransmissionMap;
use crate::error::{Error, Result};

pub const DEFAULT_PROMINENCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Field (T).
    pub field: f64,
    /// Refined frequency (THz).
    pub freq: f64,
    /// Refined transmittance at the peak.
    pub height: f64,
}

/// Peaks of every column, ordered by field then frequency.
pub fn extract_peaks(map: &TransmissionMap, prominence: f64, max_peaks: usize) -> Result<Vec<Peak>> {
    if !(prominence.is_finite() && prominence > 0.0) {
        return Err(Error::domain(format!("prominence must be > 0 (got {prominence})")));
    }
    Ok(map
        .field_axis
        .iter()
        .zip(&map.values)
        .flat_map(|(&field, col)| {
            column_peaks(&map.freq_axis, col, prominence, max_peaks)
                .into_iter()
                .map(move |(freq, height)| Peak { field, freq, height })
        })
        .collect())
}

/// `(frequency, height)` of the peaks of one column, ascending in frequency.
pub fn column_peaks(freqs: &[f64], values: &[f64], prominence: f64, max_peaks: usize) -> Vec<(f64, f64)> {
    let n = values.len().min(freqs.len());
    if n < 3 || max_peaks == 0 {
        return Vec::new();
    }
    let values = &values[..n];
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    if !(range > 0.0) {
        return Vec::new();
    }
    let threshold = prominence * range;

    let mut found: Vec<(usize, f64)> = local_maxima(values)
        .into_iter()
        .map(|i| (i, topographic_prominence(values, i)))
        .filter(|&(_, p)| p >= threshold)
        .collect();
    found.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    found.truncate(max_peaks);
    found.sort_by_key(|&(i, _)| i);
    found.into_iter().map(|(i, _)| refine(freqs, values, i)).collect()
}

fn local_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] {
            // Walk across a plateau.
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Height above the higher of the two lowest points reached before climbing
/// above the peak on either side (or hitting the edge).
fn topographic_prominence(values: &[f64], peak: usize) -> f64 {
    let h = values[peak];
    let mut left_min = h;
    for &v in values[..peak].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &values[peak + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

/// Vertex of the parabola through points `i−1, i, i+1`.
fn refine(freqs: &[f64], values: &[f64], i: usize) -> (f64, f64) {
    let (x0, x1, x2) = (freqs[i - 1], freqs[i], freqs[i + 1]);
    let (y0, y1, y2) = (values[i - 1], values[i], values[i + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if !(curvature < 0.0) {
        return (x1, y1);
    }
    // y = y1 + d·(x − x1) + curvature·(x − x1)² with d the slope at x1.
    let slope = d01 + curvature * (x1 - x0);
    let dx = (-slope / (2.0 * curvature)).clamp(x0 - x1, x2 - x1);
    (x1 + dx, y1 + slope * dx + curvature * dx * dx)
}
