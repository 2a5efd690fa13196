//! Motor control: turns the engram node plan into a smooth continuous
//! trajectory. Nodes are linked with Bresenham lines on a sub-grid lattice,
//! long straight runs are bent into shallow triangles, and cascaded Kaiser
//! inertial filters (finger / forearm / wrist) smooth the path, stopping at
//! every stroke limit. Contact points are re-imposed on the filtered result.

mod filter;
mod kaiser;
mod raster;
mod triangle;

pub use filter::{apply_inertial_filters, enforce_contact_points};
pub use kaiser::{bessel_i0, kaiser_kernel};
pub use raster::{bresenham, rasterize_engram, RASTER_SUBDIVISIONS};
pub use triangle::triangularize_straight_strokes;

use crate::geometry::Point;
use serde::{Deserialize, Serialize};

/// Per-writer motor parameters. Filter lengths follow N = L * v^2, rounded
/// to the nearest odd sample count so each kernel has a centre tap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorProfile {
    /// Writing-speed class from the morphological table (unitless).
    pub velocity: f64,
    /// Finger inertia L_f, in [3, 4].
    pub inertia_finger: f64,
    /// Forearm inertia L_a, in [3, 4].
    pub inertia_forearm: f64,
    /// Wrist inertia L_w, in [3, 4].
    pub inertia_wrist: f64,
    /// Kaiser window shape parameter (0.1).
    pub beta: f64,
    /// Indic adaptation keeps the wrist filter at identity by default.
    pub wrist_enabled: bool,
    /// Triangle apex height as a fraction of the straight-run length, in
    /// [0, 0.1]; constant per writer.
    pub triangle_height_frac: f64,
    /// Which side straight runs bend toward (+1 or -1), constant per writer.
    pub triangle_side: f64,
}

impl MotorProfile {
    pub const BETA: f64 = 0.1;

    /// Odd sample count for a filter with inertia `l`.
    pub fn filter_taps(&self, l: f64) -> usize {
        round_to_odd(l * self.velocity * self.velocity)
    }

    pub fn finger_taps(&self) -> usize {
        self.filter_taps(self.inertia_finger)
    }

    pub fn forearm_taps(&self) -> usize {
        self.filter_taps(self.inertia_forearm)
    }

    pub fn wrist_taps(&self) -> usize {
        if self.wrist_enabled {
            self.filter_taps(self.inertia_wrist)
        } else {
            1
        }
    }
}

fn round_to_odd(x: f64) -> usize {
    let n = x.round().max(1.0) as usize;
    if n % 2 == 1 {
        n
    } else if x >= n as f64 {
        n + 1
    } else {
        (n - 1).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenState {
    Down,
    Up,
}

/// Continuous spatial polyline at sub-grid resolution, partitioned into
/// strokes by the speed-minimum markers carried over from the engram.
///
/// `stroke_boundaries` holds point indices, strictly increasing, starting at
/// 0 and ending at `points.len() - 1`; stroke `j` spans the inclusive index
/// range `[boundaries[j], boundaries[j+1]]` and shares its endpoints with
/// the neighbouring strokes. A pen lift starts a new stroke; a pen descent
/// does not (the pen-up and the following pen-down start share one speed
/// cycle).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<Point>,
    pub pen: Vec<PenState>,
    pub stroke_boundaries: Vec<usize>,
}

impl Trajectory {
    pub fn stroke_count(&self) -> usize {
        self.stroke_boundaries.len().saturating_sub(1)
    }

    /// Inclusive index range of stroke `j`.
    pub fn stroke_span(&self, j: usize) -> (usize, usize) {
        (self.stroke_boundaries[j], self.stroke_boundaries[j + 1])
    }

    pub fn stroke_arc_length(&self, j: usize) -> f64 {
        let (a, b) = self.stroke_span(j);
        self.points[a..=b].windows(2).map(|w| w[0].dist(w[1])).sum()
    }

    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].dist(w[1])).sum()
    }

    pub fn pen_down_arc_length(&self) -> f64 {
        self.points
            .windows(2)
            .zip(self.pen.windows(2))
            .filter(|(_, s)| s[1] == PenState::Down)
            .map(|(w, _)| w[0].dist(w[1]))
            .sum()
    }

    /// Stroke contains at least one in-air point.
    pub fn stroke_has_pen_up(&self, j: usize) -> bool {
        let (a, b) = self.stroke_span(j);
        self.pen[a..=b].iter().any(|s| *s == PenState::Up)
    }

    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let first = *self.points.first()?;
        let mut lo = first;
        let mut hi = first;
        for p in &self.points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }

    /// Structural sanity used in debug builds and tests.
    pub fn check_invariants(&self) -> bool {
        if self.points.len() != self.pen.len() {
            return false;
        }
        if self.points.is_empty() {
            return self.stroke_boundaries.is_empty();
        }
        if self.stroke_boundaries.first() != Some(&0)
            || self.stroke_boundaries.last() != Some(&(self.points.len() - 1))
        {
            return false;
        }
        self.stroke_boundaries.windows(2).all(|w| w[0] < w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_rounding() {
        assert_eq!(round_to_odd(0.2), 1);
        assert_eq!(round_to_odd(1.0), 1);
        assert_eq!(round_to_odd(2.0), 3); // ties between odds round up
        assert_eq!(round_to_odd(1.9), 1);
        assert_eq!(round_to_odd(2.2), 3);
        assert_eq!(round_to_odd(3.4), 3);
        assert_eq!(round_to_odd(24.2), 25);
    }

    #[test]
    fn filter_taps_follow_inertia_times_v_squared() {
        let p = MotorProfile {
            velocity: 2.63,
            inertia_finger: 3.5,
            inertia_forearm: 3.5,
            inertia_wrist: 3.5,
            beta: MotorProfile::BETA,
            wrist_enabled: false,
            triangle_height_frac: 0.05,
            triangle_side: 1.0,
        };
        // 3.5 * 2.63^2 = 24.21 -> 25 taps.
        assert_eq!(p.finger_taps(), 25);
        assert_eq!(p.wrist_taps(), 1); // Indic default: identity
    }
}
