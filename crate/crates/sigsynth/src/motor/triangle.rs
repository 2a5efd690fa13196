//! Straight-run triangularization: unnaturally straight long strokes are
//! bent into two segments through a midpoint displaced perpendicular to the
//! chord by a per-writer fraction of the run length (at most d/10).

use super::{PenState, Trajectory};
use crate::geometry::{point_segment_distance, Point};

/// Rebuilds each maximal collinear run of arc length >= `min_run_mm` as two
/// legs through the displaced apex. `side` (+1/-1) picks the bend direction
/// and is constant per writer; `height_frac` is in [0, 0.1].
pub fn triangularize_straight_strokes(
    traj: &Trajectory,
    height_frac: f64,
    min_run_mm: f64,
    side: f64,
) -> Trajectory {
    debug_assert!((0.0..=0.1).contains(&height_frac));
    if height_frac == 0.0 || traj.points.len() < 3 {
        return traj.clone();
    }

    let n = traj.points.len();
    // Mean spacing sets the collinearity tolerance (half a raster step) and
    // the rebuild density.
    let step = traj.arc_length() / (n - 1) as f64;
    let tol = 0.55 * step;

    let mut points: Vec<Point> = Vec::with_capacity(n + 16);
    let mut pen: Vec<PenState> = Vec::with_capacity(n + 16);
    let mut boundaries: Vec<usize> = Vec::with_capacity(traj.stroke_boundaries.len());
    let mut next_boundary = 0usize;

    let mut i = 0usize;
    while i < n {
        // Emit point i, tracking remapped stroke boundaries.
        while next_boundary < traj.stroke_boundaries.len()
            && traj.stroke_boundaries[next_boundary] == i
        {
            boundaries.push(points.len());
            next_boundary += 1;
        }
        points.push(traj.points[i]);
        pen.push(traj.pen[i]);
        if i + 1 >= n {
            break;
        }

        // Largest j such that i..=j is straight, same pen state, and does
        // not cross a stroke boundary.
        let span_end = traj
            .stroke_boundaries
            .iter()
            .copied()
            .find(|&b| b > i)
            .unwrap_or(n - 1);
        let mut j = i + 1;
        let mut best = i;
        while j <= span_end && traj.pen[j] == traj.pen[i] {
            let a = traj.points[i];
            let b = traj.points[j];
            if traj.points[i..=j].iter().all(|p| point_segment_distance(*p, a, b) <= tol) {
                best = j;
                j += 1;
            } else {
                break;
            }
        }

        let a = traj.points[i];
        let b = traj.points[best];
        let d = a.dist(b);
        if best > i + 1 && d >= min_run_mm {
            // Replace the run with two legs through the apex.
            let apex = a.lerp(b, 0.5) + (b - a).normalized().perp() * (side * height_frac * d);
            let state = traj.pen[i];
            let leg = |from: Point, to: Point, points: &mut Vec<Point>, pen: &mut Vec<PenState>| {
                let len = from.dist(to);
                let k = (len / step).ceil().max(1.0) as usize;
                for t in 1..=k {
                    points.push(from.lerp(to, t as f64 / k as f64));
                    pen.push(state);
                }
            };
            leg(a, apex, &mut points, &mut pen);
            leg(apex, b, &mut points, &mut pen);
            // Skip the original interior; boundaries cannot occur inside.
            i = best;
            // The run endpoint was just emitted by the second leg.
            while next_boundary < traj.stroke_boundaries.len()
                && traj.stroke_boundaries[next_boundary] < best
            {
                next_boundary += 1;
            }
            if i == n - 1 {
                while next_boundary < traj.stroke_boundaries.len()
                    && traj.stroke_boundaries[next_boundary] == i
                {
                    boundaries.push(points.len() - 1);
                    next_boundary += 1;
                }
                break;
            }
        } else {
            i += 1;
        }
    }

    let out = Trajectory { points, pen, stroke_boundaries: boundaries };
    debug_assert!(out.check_invariants(), "triangularization broke invariants");
    out
}
