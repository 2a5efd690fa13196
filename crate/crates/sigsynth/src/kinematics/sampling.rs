//! Uniform time sampling: accumulated time along the trajectory via the
//! per-stroke time-distance map, then one output point per multiple of
//! 1/fm (the trajectory point nearest in time).

use super::{OnlineSample, OnlineSignature, VelocityProfile};
use crate::motor::Trajectory;
use crate::{Error, Result};

/// Accumulated time at every trajectory point. Inside stroke `j` the time
/// follows the inverse distance map of its lognormal; the shared boundary
/// points sit exactly at the stroke support edges.
pub fn point_times(traj: &Trajectory, profile: &VelocityProfile) -> Result<Vec<f64>> {
    if profile.strokes.len() != traj.stroke_count() {
        return Err(Error::Structural(format!(
            "profile has {} strokes, trajectory {}",
            profile.strokes.len(),
            traj.stroke_count()
        )));
    }
    let mut times = vec![0.0f64; traj.points.len()];
    for (j, stroke) in profile.strokes.iter().enumerate() {
        let (a, b) = traj.stroke_span(j);
        let arc = traj.stroke_arc_length(j);
        if (stroke.amplitude - arc).abs() > 1e-3 * stroke.amplitude.max(1e-12) {
            return Err(Error::Structural(format!(
                "stroke {j}: amplitude {} differs from arc length {arc} by more than 0.1%",
                stroke.amplitude
            )));
        }
        let start = stroke.support_start();
        let end = stroke.support_end();
        times[a] = start;
        let mut s = 0.0;
        for i in a + 1..=b {
            s += traj.points[i - 1].dist(traj.points[i]);
            times[i] = if i == b {
                end
            } else if s <= 0.0 {
                start
            } else if s >= stroke.amplitude {
                end
            } else {
                stroke.arc_time(s)?.clamp(start, end)
            };
        }
    }
    // Monotone by construction; enforce against float dust.
    for i in 1..times.len() {
        if times[i] < times[i - 1] {
            times[i] = times[i - 1];
        }
    }
    Ok(times)
}

/// Test hook and sampling core: emits one sample per multiple of 1/fm,
/// choosing the trajectory point whose accumulated time is nearest.
pub fn sample_with_times(
    traj: &Trajectory,
    times: &[f64],
    total_duration: f64,
    fm_hz: f64,
) -> OnlineSignature {
    let count = (total_duration * fm_hz).round() as usize;
    let mut samples = Vec::with_capacity(count + 1);
    let mut cursor = 0usize;
    for k in 0..=count {
        let t = k as f64 / fm_hz;
        while cursor + 1 < times.len()
            && (times[cursor + 1] - t).abs() <= (times[cursor] - t).abs()
        {
            cursor += 1;
        }
        let p = traj.points[cursor];
        samples.push(OnlineSample { x: p.x, y: p.y, t, pen: traj.pen[cursor] });
    }
    OnlineSignature { samples, fm_hz }
}

/// Samples the trajectory under the velocity profile at `fm_hz`.
pub fn sample_trajectory(
    traj: &Trajectory,
    profile: &VelocityProfile,
    fm_hz: f64,
) -> Result<OnlineSignature> {
    if traj.points.is_empty() {
        return Err(Error::InvalidInput("empty trajectory".into()));
    }
    let times = point_times(traj, profile)?;
    Ok(sample_with_times(traj, &times, profile.total_duration, fm_hz))
}
