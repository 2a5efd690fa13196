//! Stroke timing: total signature duration from a length model, split into
//! near-equal stroke durations whose dispersion (std/mean) follows the
//! observed N(0.32, 0.06) distribution.

use crate::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Physical speed assigned to one unit of the unitless velocity class, used
/// to calibrate the duration model (mean speed = class * this, mm/s).
pub const SPEED_PER_VELOCITY_CLASS: f64 = 30.0;

/// Dispersion draws are clamped to this window (widened if the configured
/// mean itself lies outside, so degenerate test hooks keep working).
const DISPERSION_CLAMP: (f64, f64) = (0.05, 0.6);

/// Each stroke keeps at least this fraction of the mean duration.
const MIN_RELATIVE_DURATION: f64 = 0.2;

/// Duration clamp for a whole signature, seconds.
const DURATION_CLAMP: (f64, f64) = (0.5, 30.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingModel {
    /// Mean of the per-signature stroke-duration dispersion (0.32).
    pub dispersion_mean: f64,
    /// Std of the dispersion across signatures (0.06).
    pub dispersion_std: f64,
    /// T = a * L^b * e^eps with eps ~ N(0, sigma_t^2), L in mm, T in s.
    pub duration_a: f64,
    pub duration_b: f64,
    pub duration_sigma: f64,
}

impl TimingModel {
    /// Model for a writer of the given velocity class: mean speed matches
    /// class * SPEED_PER_VELOCITY_CLASS with a log-linear length relation.
    pub fn for_velocity(velocity: f64) -> Self {
        TimingModel {
            dispersion_mean: 0.32,
            dispersion_std: 0.06,
            duration_a: 1.0 / (SPEED_PER_VELOCITY_CLASS * velocity.max(0.1)),
            duration_b: 1.0,
            duration_sigma: 0.15,
        }
    }
}

/// Total signature duration for a trajectory of the given length (mm),
/// clamped to [0.5 s, 30 s].
pub fn sample_total_duration<R: Rng + ?Sized>(
    length_mm: f64,
    timing: &TimingModel,
    rng: &mut R,
) -> f64 {
    let eps = if timing.duration_sigma > 0.0 {
        Normal::new(0.0, timing.duration_sigma).expect("valid sigma").sample(rng)
    } else {
        0.0
    };
    let t = timing.duration_a * length_mm.powf(timing.duration_b) * eps.exp();
    t.clamp(DURATION_CLAMP.0, DURATION_CLAMP.1)
}

/// Splits `total` seconds into `n` positive durations: the whole duration
/// divided by the stroke count, then modulated so the realized std/mean
/// equals a dispersion value drawn from N(mean, std).
pub fn assign_stroke_times<R: Rng + ?Sized>(
    n: usize,
    total: f64,
    timing: &TimingModel,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot split a duration over zero strokes".into()));
    }
    if !(total > 0.0) {
        return Err(Error::InvalidInput(format!("total duration {total} must be positive")));
    }
    if n == 1 {
        return Ok(vec![total]);
    }

    let lo = DISPERSION_CLAMP.0.min(timing.dispersion_mean);
    let hi = DISPERSION_CLAMP.1.max(timing.dispersion_mean);
    let target = if timing.dispersion_std > 0.0 {
        Normal::new(timing.dispersion_mean, timing.dispersion_std)
            .expect("valid dispersion")
            .sample(rng)
            .clamp(lo, hi)
    } else {
        timing.dispersion_mean.clamp(lo, hi)
    };
    if target <= 0.0 {
        return Ok(vec![total / n as f64; n]);
    }

    // Random positive sequence rescaled to the exact coefficient of
    // variation, rejecting shapes that would starve a stroke.
    for _ in 0..100_000 {
        let g: Vec<f64> = (0..n).map(|_| 0.5 + rng.gen::<f64>()).collect();
        let m = g.iter().sum::<f64>() / n as f64;
        let s = (g.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n as f64).sqrt();
        if s < 1e-12 {
            continue;
        }
        let scale = target / s;
        let d: Vec<f64> = g.iter().map(|x| 1.0 + (x - m) * scale).collect();
        if d.iter().any(|x| *x < MIN_RELATIVE_DURATION) {
            continue;
        }
        let sum: f64 = d.iter().sum();
        return Ok(d.into_iter().map(|x| x * total / sum).collect());
    }
    Err(Error::InvalidParameter(format!(
        "could not realize dispersion {target} over {n} strokes"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{mean, std_dev};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dispersion(d: &[f64]) -> f64 {
        std_dev(d) / mean(d)
    }

    #[test]
    fn single_stroke_takes_everything() {
        let timing = TimingModel::for_velocity(2.5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = assign_stroke_times(1, 3.2, &timing, &mut rng).unwrap();
        assert_eq!(d, vec![3.2]);
    }

    #[test]
    fn zero_strokes_is_invalid() {
        let timing = TimingModel::for_velocity(2.5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(assign_stroke_times(0, 1.0, &timing, &mut rng).is_err());
    }

    #[test]
    fn forced_zero_dispersion_splits_equally() {
        let timing = TimingModel {
            dispersion_mean: 0.0,
            dispersion_std: 0.0,
            ..TimingModel::for_velocity(2.5)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = assign_stroke_times(4, 2.0, &timing, &mut rng).unwrap();
        for x in &d {
            assert!((x - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn durations_sum_exactly_and_match_target_dispersion() {
        let timing = TimingModel::for_velocity(3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 5, 17, 60] {
            let total = 2.75;
            let d = assign_stroke_times(n, total, &timing, &mut rng).unwrap();
            assert_eq!(d.len(), n);
            assert!((d.iter().sum::<f64>() - total).abs() < 1e-9);
            assert!(d.iter().all(|x| *x > 0.0));
            // Realized dispersion inside the clamp window.
            let c = dispersion(&d);
            assert!((0.05..=0.6).contains(&c), "dispersion {c}");
        }
    }

    #[test]
    fn dispersion_statistics_follow_the_gaussian() {
        let timing = TimingModel::for_velocity(2.8);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut realized = Vec::with_capacity(10_000);
        for _ in 0..10_000 {
            let d = assign_stroke_times(10, 2.0, &timing, &mut rng).unwrap();
            realized.push(dispersion(&d));
        }
        let m = mean(&realized);
        let s = std_dev(&realized);
        assert!((m - 0.32).abs() < 0.01, "mean dispersion {m}");
        assert!((s - 0.06).abs() < 0.01, "std of dispersion {s}");
    }

    #[test]
    fn noiseless_duration_model_is_exact() {
        let timing = TimingModel {
            dispersion_mean: 0.32,
            dispersion_std: 0.06,
            duration_a: 0.05,
            duration_b: 1.0,
            duration_sigma: 0.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = sample_total_duration(100.0, &timing, &mut rng);
        assert!((t - 5.0).abs() < 1e-12);
    }

    #[test]
    fn durations_clamp_to_half_a_second() {
        let timing = TimingModel {
            duration_a: 1e-6,
            duration_b: 1.0,
            duration_sigma: 0.0,
            ..TimingModel::for_velocity(2.5)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        assert_eq!(sample_total_duration(10.0, &timing, &mut rng), 0.5);
    }

    #[test]
    fn mean_speed_matches_the_velocity_class_mapping() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for v in [2.0, 2.63, 4.0, 6.0] {
            let timing = TimingModel::for_velocity(v);
            let mut speeds = Vec::with_capacity(10_000);
            for _ in 0..10_000 {
                let length = 150.0 + rng.gen::<f64>() * 250.0;
                let t = sample_total_duration(length, &timing, &mut rng);
                speeds.push(length / t);
            }
            let m = mean(&speeds);
            let target = SPEED_PER_VELOCITY_CLASS * v;
            assert!(
                (m - target).abs() / target < 0.10,
                "v {v}: mean speed {m} vs {target}"
            );
        }
    }
}
