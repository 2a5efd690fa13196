//! Histogram verifier: absolute and relative frequency histograms over
//! quantized writing direction (8 sectors) and quantized speed (8
//! per-signature quantile bins), compared with Manhattan distance.

use crate::kinematics::OnlineSignature;
use crate::motor::PenState;
use crate::{Error, Result};

const DIR_BINS: usize = 8;
const SPEED_BINS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramFeatures {
    /// Raw counts: direction bins then speed bins.
    pub absolute: Vec<u64>,
    /// The same histogram normalized to unit total mass.
    pub relative: Vec<f64>,
    pub fm_hz: f64,
}

/// Direction and speed histograms over consecutive pen-down sample pairs.
pub fn extract_histograms(sig: &OnlineSignature) -> Result<HistogramFeatures> {
    let mut dirs = Vec::new();
    let mut speeds = Vec::new();
    for w in sig.samples.windows(2) {
        if w[0].pen != PenState::Down || w[1].pen != PenState::Down {
            continue;
        }
        let dx = w[1].x - w[0].x;
        let dy = w[1].y - w[0].y;
        dirs.push(dy.atan2(dx));
        speeds.push(dx.hypot(dy) * sig.fm_hz);
    }
    if dirs.is_empty() {
        return Err(Error::InvalidInput(
            "histograms need at least two consecutive pen-down samples".into(),
        ));
    }

    let mut absolute = vec![0u64; DIR_BINS + SPEED_BINS];
    for &theta in &dirs {
        let mut bin =
            ((theta + std::f64::consts::PI) / (2.0 * std::f64::consts::PI) * DIR_BINS as f64)
                .floor() as isize;
        bin = bin.clamp(0, DIR_BINS as isize - 1);
        absolute[bin as usize] += 1;
    }
    // Per-signature quantile edges; values equal to an edge fall in the
    // lower bin.
    let mut sorted = speeds.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let edges: Vec<f64> = (1..SPEED_BINS)
        .map(|k| {
            let idx = (k * sorted.len()) / SPEED_BINS;
            sorted[idx.min(sorted.len() - 1)]
        })
        .collect();
    for &v in &speeds {
        let bin = edges.iter().filter(|e| v > **e).count();
        absolute[DIR_BINS + bin] += 1;
    }

    let total: u64 = absolute.iter().sum();
    let relative: Vec<f64> = absolute.iter().map(|c| *c as f64 / total as f64).collect();
    Ok(HistogramFeatures { absolute, relative, fm_hz: sig.fm_hz })
}

/// Manhattan (L1) distance over the concatenated feature vector: the
/// absolute histogram scaled to seconds-per-bin (counts / fm) plus the
/// relative histogram.
pub fn manhattan_score(a: &HistogramFeatures, b: &HistogramFeatures) -> Result<f64> {
    if a.absolute.len() != b.absolute.len() || a.relative.len() != b.relative.len() {
        return Err(Error::InvalidInput(format!(
            "histogram dimensionality mismatch: {} vs {}",
            a.absolute.len(),
            b.absolute.len()
        )));
    }
    let abs_part: f64 = a
        .absolute
        .iter()
        .zip(&b.absolute)
        .map(|(x, y)| (*x as f64 / a.fm_hz - *y as f64 / b.fm_hz).abs())
        .sum();
    let rel_part: f64 =
        a.relative.iter().zip(&b.relative).map(|(x, y)| (x - y).abs()).sum();
    Ok(abs_part + rel_part)
}
