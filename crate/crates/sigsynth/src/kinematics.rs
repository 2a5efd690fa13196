//! Signature dynamics: a lognormal speed pulse per stroke, near-equal
//! stroke durations with a controlled dispersion, and uniform time sampling
//! of the spatial trajectory at the output rate.

mod io;
mod lognormal;
mod sampling;
mod timing;

pub use io::{read_online_text, write_online_text, OnlineHeader};
pub use lognormal::{
    erf_inv, lognormal_kurtosis, lognormal_skewness, max_feasible_sigma, sigma_for_skewness,
    synth_stroke_lognormal, StrokeLognormal, KURTOSIS_WINDOW, SKEWNESS_WINDOW,
};
pub use sampling::{point_times, sample_trajectory, sample_with_times};
pub use timing::{assign_stroke_times, sample_total_duration, TimingModel, SPEED_PER_VELOCITY_CLASS};

use crate::motor::{PenState, Trajectory};
use crate::Result;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Default output sampling rate in Hz.
pub const DEFAULT_FM_HZ: f64 = 100.0;

/// The multi-stroke speed plan: one lognormal per stroke of the trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VelocityProfile {
    pub strokes: Vec<StrokeLognormal>,
    pub total_duration: f64,
}

impl VelocityProfile {
    /// Superposition speed v(t): sum of all stroke pulses.
    pub fn speed_at(&self, t: f64) -> f64 {
        self.strokes.iter().map(|s| s.speed(t)).sum()
    }
}

/// One output sample of the online signature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnlineSample {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub pen: PenState,
}

/// Uniformly time-sampled signature at `fm_hz`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineSignature {
    pub samples: Vec<OnlineSample>,
    pub fm_hz: f64,
}

impl OnlineSignature {
    pub fn duration(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    pub fn pen_down_count(&self) -> usize {
        self.samples.iter().filter(|s| s.pen == PenState::Down).count()
    }
}

/// Builds the full velocity profile for a trajectory: total duration from
/// the length model, near-equal stroke durations fit to the dispersion
/// target, and one lognormal per stroke (pen-up strokes included; they share
/// the same speed cycle machinery).
pub fn build_velocity_profile<R: Rng + ?Sized>(
    traj: &Trajectory,
    timing: &TimingModel,
    sigma_range: (f64, f64),
    fm_hz: f64,
    rng: &mut R,
) -> Result<VelocityProfile> {
    let n = traj.stroke_count();
    if n == 0 {
        return Err(crate::Error::InvalidInput("trajectory has no strokes".into()));
    }
    let length = traj.arc_length();
    let sampled = sample_total_duration(length, timing, rng);
    // Floor guarantees every stroke duration stays above 1/fm even at the
    // 0.2x relative minimum the duration splitter allows.
    let total = sampled.max(5.0 * n as f64 / fm_hz);
    let durations = assign_stroke_times(n, total, timing, rng)?;

    let mut strokes = Vec::with_capacity(n);
    let mut start = 0.0;
    for (j, d) in durations.iter().enumerate() {
        let arc = traj.stroke_arc_length(j).max(1e-9);
        strokes.push(synth_stroke_lognormal(arc, *d, start, sigma_range, 1.0 / fm_hz, rng)?);
        start += d;
    }
    Ok(VelocityProfile { strokes, total_duration: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zigzag_trajectory(strokes: usize, points_per: usize, step: f64) -> Trajectory {
        let mut points = Vec::new();
        let mut boundaries = vec![0];
        let mut x = 0.0;
        let mut y = 0.0;
        for s in 0..strokes {
            let dir = if s % 2 == 0 { (step, 0.02 * step) } else { (0.02 * step, step) };
            for _ in 0..points_per {
                x += dir.0;
                y += dir.1;
                points.push(Point::new(x, y));
            }
            boundaries.push(points.len() - 1);
        }
        boundaries.dedup();
        let n = points.len();
        Trajectory { points, pen: vec![PenState::Down; n], stroke_boundaries: boundaries }
    }

    #[test]
    fn profile_covers_all_strokes_and_total_mass() {
        let traj = zigzag_trajectory(6, 40, 0.1);
        let timing = TimingModel::for_velocity(2.6);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let profile =
            build_velocity_profile(&traj, &timing, (0.04, 0.08), 100.0, &mut rng).unwrap();
        assert_eq!(profile.strokes.len(), traj.stroke_count());
        for (j, s) in profile.strokes.iter().enumerate() {
            assert!((s.amplitude - traj.stroke_arc_length(j)).abs() < 1e-9);
        }
        // Stroke supports tile [0, total] without overlap beyond tolerance.
        let mut t = 0.0;
        for s in &profile.strokes {
            assert!((s.support_start() - t).abs() < 1e-6, "gap at {t}");
            t = s.support_end();
        }
        assert!((t - profile.total_duration).abs() < 1e-6);
    }

    #[test]
    fn integral_of_speed_equals_total_arc_length() {
        // Invariant: integral of v(t) over the signature = sum of stroke
        // amplitudes = total arc length (pen-ups are strokes too).
        let traj = zigzag_trajectory(4, 50, 0.12);
        let timing = TimingModel::for_velocity(3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let profile =
            build_velocity_profile(&traj, &timing, (0.04, 0.08), 100.0, &mut rng).unwrap();
        let total: f64 = crate::testutil::adaptive_simpson(
            &|t| profile.speed_at(t),
            -1.0,
            profile.total_duration + 5.0,
            1e-10,
            48,
        );
        let expect = traj.arc_length();
        assert!(
            (total - expect).abs() / expect < 1e-4,
            "integral {total} vs arc length {expect}"
        );
    }
}
