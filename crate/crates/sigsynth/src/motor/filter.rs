//! Inertial filtering and contact-point enforcement.
//!
//! Each stroke is filtered independently between its limits: short strokes
//! with the finger kernel, long strokes and strokes containing in-air points
//! with the forearm kernel, then the wrist kernel over the whole sequence.
//! Boundary samples are preserved exactly by odd (value-mirrored) reflection
//! padding, which the contact-point constraint relies on.

use super::kaiser::kaiser_kernel;
use super::{MotorProfile, PenState, Trajectory};
use crate::geometry::Point;
use crate::{Error, Result};

/// Strokes at most this many grid spacings long use the finger kernel.
const SHORT_STROKE_SPACINGS: f64 = 2.0;

/// Odd-reflection convolution of one span. The kernel must have odd length;
/// it is truncated so the padding never exceeds the span (`taps <= 2n - 1`).
/// Both span endpoints are exact fixed points of the operation.
fn filter_span(xs: &[f64], taps: usize, beta: f64) -> Vec<f64> {
    let n = xs.len();
    if n < 3 || taps <= 1 {
        return xs.to_vec();
    }
    let taps = taps.min(2 * n - 1);
    let taps = if taps % 2 == 0 { taps - 1 } else { taps };
    if taps <= 1 {
        return xs.to_vec();
    }
    let kernel = kaiser_kernel(taps - 1, beta).expect("taps >= 3");
    let c = (taps - 1) / 2;
    let val = |idx: i64| -> f64 {
        if idx < 0 {
            2.0 * xs[0] - xs[(-idx) as usize]
        } else if idx as usize >= n {
            let j = 2 * (n - 1) - idx as usize;
            2.0 * xs[n - 1] - xs[j]
        } else {
            xs[idx as usize]
        }
    };
    (0..n)
        .map(|i| {
            kernel
                .iter()
                .enumerate()
                .map(|(k, h)| h * val(i as i64 + k as i64 - c as i64))
                .sum()
        })
        .collect()
}

fn filter_span_points(points: &mut [Point], taps: usize, beta: f64) {
    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    let fx = filter_span(&xs, taps, beta);
    let fy = filter_span(&ys, taps, beta);
    for (p, (x, y)) in points.iter_mut().zip(fx.into_iter().zip(fy)) {
        *p = Point::new(x, y);
    }
}

/// Applies the finger / forearm / wrist Kaiser cascade. Stroke structure,
/// pen states and point counts are unchanged.
pub fn apply_inertial_filters(
    traj: &Trajectory,
    profile: &MotorProfile,
    grid_spacing: f64,
) -> Trajectory {
    let mut out = traj.clone();
    let finger = profile.finger_taps();
    let forearm = profile.forearm_taps();
    let short_limit = SHORT_STROKE_SPACINGS * grid_spacing;

    for j in 0..traj.stroke_count() {
        let (a, b) = traj.stroke_span(j);
        let taps = if traj.stroke_has_pen_up(j) || traj.stroke_arc_length(j) > short_limit {
            forearm
        } else {
            finger
        };
        filter_span_points(&mut out.points[a..=b], taps, profile.beta);
    }

    let wrist = profile.wrist_taps();
    if wrist > 1 && !out.points.is_empty() {
        let len = out.points.len();
        filter_span_points(&mut out.points[0..len], wrist, profile.beta);
    }
    out
}

/// Pulls the trajectory through each contact point: the nearest pen-down
/// point is translated onto the contact and the correction decays linearly
/// to zero over +-window points (inside the same pen-down span).
pub fn enforce_contact_points(
    traj: &Trajectory,
    contacts: &[Point],
    window: usize,
    max_dist: f64,
) -> Result<Trajectory> {
    let mut out = traj.clone();
    if contacts.is_empty() {
        return Ok(out);
    }

    for c in contacts {
        let (idx, dist) = nearest_pen_down(&out, *c)?;
        if dist > max_dist {
            return Err(Error::ContactViolation { x: c.x, y: c.y, dist, limit: max_dist });
        }
        let correction = *c - out.points[idx];
        let (lo, hi) = pen_down_span(&out, idx);
        let w = window.max(1) as i64;
        for k in -w..=w {
            let i = idx as i64 + k;
            if i < lo as i64 || i > hi as i64 {
                continue;
            }
            let weight = 1.0 - (k.unsigned_abs() as f64) / w as f64;
            if weight > 0.0 {
                out.points[i as usize] += correction * weight;
            }
        }
    }

    // Overlapping blends can disturb earlier contacts; snap the nearest
    // point exactly where needed.
    for c in contacts {
        let (idx, dist) = nearest_pen_down(&out, *c)?;
        if dist > 1e-12 {
            out.points[idx] = *c;
        }
    }
    for c in contacts {
        let (_, dist) = nearest_pen_down(&out, *c)?;
        if dist > 1e-9 {
            return Err(Error::ContactViolation { x: c.x, y: c.y, dist, limit: 1e-9 });
        }
    }
    Ok(out)
}

fn nearest_pen_down(traj: &Trajectory, c: Point) -> Result<(usize, f64)> {
    traj.points
        .iter()
        .zip(&traj.pen)
        .enumerate()
        .filter(|(_, (_, s))| **s == PenState::Down)
        .map(|(i, (p, _))| (i, p.dist(c)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite distances"))
        .ok_or_else(|| Error::InvalidInput("trajectory has no pen-down points".into()))
}

/// Maximal pen-down index span containing `idx`.
fn pen_down_span(traj: &Trajectory, idx: usize) -> (usize, usize) {
    let mut lo = idx;
    while lo > 0 && traj.pen[lo - 1] == PenState::Down {
        lo -= 1;
    }
    let mut hi = idx;
    while hi + 1 < traj.pen.len() && traj.pen[hi + 1] == PenState::Down {
        hi += 1;
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn profile(v: f64) -> MotorProfile {
        MotorProfile {
            velocity: v,
            inertia_finger: 3.0,
            inertia_forearm: 3.5,
            inertia_wrist: 3.0,
            beta: 0.1,
            wrist_enabled: false,
            triangle_height_frac: 0.0,
            triangle_side: 1.0,
        }
    }

    fn right_angle() -> Trajectory {
        // (0,0) .. (10,0) then up to (10,10), unit steps, one stroke.
        let mut points = Vec::new();
        for i in 0..=10 {
            points.push(Point::new(i as f64, 0.0));
        }
        for j in 1..=10 {
            points.push(Point::new(10.0, j as f64));
        }
        let n = points.len();
        Trajectory { points, pen: vec![PenState::Down; n], stroke_boundaries: vec![0, n - 1] }
    }

    #[test]
    fn identity_kernels_change_nothing() {
        let t = right_angle();
        // v chosen so L*v^2 rounds to 1 tap.
        let mut p = profile(0.5);
        p.inertia_finger = 3.0;
        p.inertia_forearm = 3.0;
        let out = apply_inertial_filters(&t, &p, 1.0);
        assert_eq!(out, t);
    }

    #[test]
    fn moving_average_displaces_corner_to_analytic_position() {
        // beta -> 0 makes the Kaiser kernel a 9-tap moving average. The
        // corner at (10,0) averages 4 points on each leg:
        // x = (6+7+8+9+10*5)/9 = 80/9, y = (0*5+1+2+3+4)/9 = 10/9.
        let t = right_angle();
        let mut p = profile(1.0);
        p.beta = 0.0;
        p.inertia_forearm = 9.0; // 9 taps on this long stroke
        let out = apply_inertial_filters(&t, &p, 1.0);
        let corner = out.points[10];
        assert!((corner.x - 80.0 / 9.0).abs() < 1e-12, "corner.x {}", corner.x);
        assert!((corner.y - 10.0 / 9.0).abs() < 1e-12, "corner.y {}", corner.y);
    }

    #[test]
    fn stroke_endpoints_are_fixed_points() {
        let t = right_angle();
        let mut p = profile(2.6);
        p.inertia_forearm = 3.7;
        let out = apply_inertial_filters(&t, &p, 1.0);
        assert!(out.points[0].dist(t.points[0]) < 1e-9);
        let last = t.points.len() - 1;
        assert!(out.points[last].dist(t.points[last]) < 1e-9);
    }

    #[test]
    fn filtering_preserves_structure_and_stays_near_input() {
        let t = right_angle();
        let p = profile(3.0);
        let out = apply_inertial_filters(&t, &p, 1.0);
        assert_eq!(out.points.len(), t.points.len());
        assert_eq!(out.pen, t.pen);
        assert_eq!(out.stroke_boundaries, t.stroke_boundaries);
        // Hausdorff bound: max displacement within max taps * step.
        let cap = p.forearm_taps() as f64 * 1.0;
        for (a, b) in out.points.iter().zip(&t.points) {
            assert!(a.dist(*b) <= cap);
        }
    }

    #[test]
    fn contact_already_on_trajectory_is_untouched() {
        let t = right_angle();
        let out = enforce_contact_points(&t, &[Point::new(5.0, 0.0)], 5, 1.0).unwrap();
        assert_eq!(out, t);
    }

    #[test]
    fn contact_blend_is_linear_over_the_window() {
        let t = right_angle();
        let c = Point::new(5.0, 0.5); // 0.5 mm above the horizontal leg
        let out = enforce_contact_points(&t, &[c], 5, 1.0).unwrap();
        assert!((out.points[5].y - 0.5).abs() < 1e-12, "nearest moved fully");
        assert!((out.points[10].y - 0.0).abs() < 1e-12, "window edge fixed");
        assert!((out.points[7].y - 0.3).abs() < 1e-12, "linear falloff");
        assert!((out.points[3].y - 0.3).abs() < 1e-12);
    }

    #[test]
    fn distant_contact_is_rejected() {
        let t = right_angle();
        let err = enforce_contact_points(&t, &[Point::new(5.0, 8.0)], 5, 1.0).unwrap_err();
        assert!(matches!(err, Error::ContactViolation { .. }));
    }

    #[test]
    fn fuzzed_contacts_end_up_exactly_on_the_trajectory() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let t = right_angle();
            let idx = rng.gen_range(0..t.points.len());
            let c = t.points[idx]
                + Point::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
            let out = enforce_contact_points(&t, &[c], 4, 1.0).unwrap();
            let d = out
                .points
                .iter()
                .map(|p| p.dist(c))
                .fold(f64::INFINITY, f64::min);
            assert!(d < 1e-9, "contact left {d} away");
        }
    }

    #[test]
    fn overlapping_contacts_are_all_satisfied() {
        let t = right_angle();
        let contacts = [Point::new(4.0, 0.4), Point::new(6.0, -0.3)];
        let out = enforce_contact_points(&t, &contacts, 5, 1.0).unwrap();
        for c in &contacts {
            let d = out.points.iter().map(|p| p.dist(*c)).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-9);
        }
    }
}
