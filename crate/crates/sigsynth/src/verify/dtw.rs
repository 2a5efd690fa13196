//! DTW verifier: classic dynamic programming with per-step Euclidean
//! distance over z-normalized pen positions, result normalized by the
//! warping-path length.

use crate::kinematics::OnlineSignature;
use crate::motor::PenState;
use crate::{Error, Result};

/// Per-sample feature vectors: z-normalized x and y (mean/std over pen-down
/// samples). Only pen-down samples enter the sequence; in-air interpolation
/// carries no writer information.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSequence {
    pub points: Vec<[f64; 2]>,
}

pub fn extract_features(sig: &OnlineSignature) -> Result<FeatureSequence> {
    let down: Vec<[f64; 2]> = sig
        .samples
        .iter()
        .filter(|s| s.pen == PenState::Down)
        .map(|s| [s.x, s.y])
        .collect();
    if down.is_empty() {
        return Err(Error::InvalidInput("signature has no pen-down samples".into()));
    }
    let n = down.len() as f64;
    let mean = [
        down.iter().map(|p| p[0]).sum::<f64>() / n,
        down.iter().map(|p| p[1]).sum::<f64>() / n,
    ];
    let mut std = [0.0f64; 2];
    for p in &down {
        std[0] += (p[0] - mean[0]) * (p[0] - mean[0]);
        std[1] += (p[1] - mean[1]) * (p[1] - mean[1]);
    }
    let std = [(std[0] / n).sqrt().max(1e-9), (std[1] / n).sqrt().max(1e-9)];
    Ok(FeatureSequence {
        points: down
            .into_iter()
            .map(|p| [(p[0] - mean[0]) / std[0], (p[1] - mean[1]) / std[1]])
            .collect(),
    })
}

#[inline]
fn euclid(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Normalized DTW distance: min-total-cost path with steps
/// {(1,0),(0,1),(1,1)}, no window, divided by that path's length.
pub fn dtw_distance(a: &FeatureSequence, b: &FeatureSequence) -> Result<f64> {
    if a.points.is_empty() || b.points.is_empty() {
        return Err(Error::InvalidInput("DTW over an empty sequence".into()));
    }
    let n = a.points.len();
    let m = b.points.len();
    // Rolling rows of (cost, path length).
    let mut prev = vec![(f64::INFINITY, 0u32); m];
    let mut cur = vec![(f64::INFINITY, 0u32); m];
    for i in 0..n {
        for j in 0..m {
            let d = euclid(&a.points[i], &b.points[j]);
            let best = if i == 0 && j == 0 {
                (0.0, 0u32)
            } else {
                // Prefer the diagonal on exact ties.
                let mut best = (f64::INFINITY, 0u32);
                if i > 0 && j > 0 && prev[j - 1].0 < best.0 {
                    best = prev[j - 1];
                }
                if i > 0 && prev[j].0 < best.0 {
                    best = prev[j];
                }
                if j > 0 && cur[j - 1].0 < best.0 {
                    best = cur[j - 1];
                }
                best
            };
            cur[j] = (best.0 + d, best.1 + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let (cost, len) = prev[m - 1];
    Ok(cost / f64::from(len))
}
