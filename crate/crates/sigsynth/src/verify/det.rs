//! DET curve and equal error rate over genuine / impostor score sets
//! (distances: lower means more similar).

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreSet {
    pub genuine: Vec<f64>,
    pub impostor: Vec<f64>,
}

impl ScoreSet {
    pub fn extend(&mut self, other: &ScoreSet) {
        self.genuine.extend_from_slice(&other.genuine);
        self.impostor.extend_from_slice(&other.impostor);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetPoint {
    pub threshold: f64,
    pub far: f64,
    pub frr: f64,
}

/// FRR/FAR trade-off along the threshold sweep (stored with descending
/// threshold so FAR is nonincreasing and FRR nondecreasing), plus the
/// interpolated equal error rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetCurve {
    pub points: Vec<DetPoint>,
    pub eer: f64,
}

impl DetCurve {
    /// CSV rows "threshold,far,frr" with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,far,frr\n");
        for p in &self.points {
            out.push_str(&format!("{:.6},{:.6},{:.6}\n", p.threshold, p.far, p.frr));
        }
        out
    }
}

fn sweep(genuine: &[f64], impostor: &[f64]) -> (Vec<DetPoint>, f64) {
    let mut g = genuine.to_vec();
    let mut i = impostor.to_vec();
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    i.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut thresholds: Vec<f64> = g.iter().chain(i.iter()).copied().collect();
    thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    thresholds.dedup();
    // Sentinels guarantee the FAR/FRR curves cross inside the sweep.
    let span = (thresholds.last().unwrap() - thresholds.first().unwrap()).max(1.0);
    thresholds.insert(0, thresholds.first().unwrap() - 0.01 * span);
    thresholds.push(thresholds.last().unwrap() + 0.01 * span);

    let far_at = |t: f64| i.partition_point(|x| *x < t) as f64 / i.len() as f64;
    let frr_at = |t: f64| (g.len() - g.partition_point(|x| *x <= t)) as f64 / g.len() as f64;

    let points: Vec<DetPoint> = thresholds
        .iter()
        .map(|&t| DetPoint { threshold: t, far: far_at(t), frr: frr_at(t) })
        .collect();

    // far - frr is nondecreasing along the ascending sweep; find the sign
    // change and interpolate both rates linearly between the two
    // thresholds.
    let mut eer = 0.5;
    for w in points.windows(2) {
        let d0 = w[0].far - w[0].frr;
        let d1 = w[1].far - w[1].frr;
        if d0 <= 0.0 && d1 >= 0.0 {
            if (d1 - d0).abs() < 1e-15 {
                eer = 0.5 * (w[0].far + w[0].frr);
            } else {
                let t = -d0 / (d1 - d0);
                let far = w[0].far + t * (w[1].far - w[0].far);
                let frr = w[0].frr + t * (w[1].frr - w[0].frr);
                eer = 0.5 * (far + frr);
            }
            break;
        }
    }
    (points, eer)
}

/// Sweeps thresholds over the union of scores and returns the DET curve
/// with the equal error rate. Score orientation is normalized first:
/// distances (lower = genuine) are assumed, and flipped if violated.
pub fn compute_det_eer(scores: &ScoreSet) -> Result<DetCurve> {
    if scores.genuine.is_empty() || scores.impostor.is_empty() {
        return Err(Error::InvalidInput("both score sides must be non-empty".into()));
    }
    let (mut points, mut eer) = sweep(&scores.genuine, &scores.impostor);
    if eer > 0.5 {
        // Orientation normalization: treat higher as more similar.
        let g: Vec<f64> = scores.genuine.iter().map(|x| -x).collect();
        let i: Vec<f64> = scores.impostor.iter().map(|x| -x).collect();
        let (p2, e2) = sweep(&g, &i);
        if e2 < eer {
            points = p2;
            eer = e2;
        }
    }
    // Descending threshold order: FAR nonincreasing, FRR nondecreasing.
    points.reverse();
    Ok(DetCurve { points, eer })
}
