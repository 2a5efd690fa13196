//! Lognormal stroke pulses: speed profile, the closed-form distance map and
//! its inverse (time as a function of distance), and per-stroke synthesis
//! under the skewness/kurtosis windows of natural handwriting.

use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

/// Accepted lognormal shape windows: skewness in [0, 0.3], non-excess
/// kurtosis in [3, 3.5] (Gaussian = 3).
pub const SKEWNESS_WINDOW: (f64, f64) = (0.0, 0.3);
pub const KURTOSIS_WINDOW: (f64, f64) = (3.0, 3.5);

/// Inverse error function to ~1e-15 relative accuracy: library initial
/// guess polished by two Newton steps on erf.
pub fn erf_inv(y: f64) -> f64 {
    let mut x = statrs::function::erf::erf_inv(y);
    for _ in 0..2 {
        let err = statrs::function::erf::erf(x) - y;
        x -= err * (PI.sqrt() / 2.0) * (x * x).exp();
    }
    x
}

/// Standard-normal quantile z with P(|Z| < z) covering 99.8% (the 0.1% and
/// 99.9% quantiles bound the stroke's temporal support).
fn z_mass() -> f64 {
    static Z: OnceLock<f64> = OnceLock::new();
    *Z.get_or_init(|| SQRT_2 * erf_inv(0.998))
}

/// One stroke's lognormal pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrokeLognormal {
    /// Stroke amplitude D (arc length of the stroke, mm).
    pub amplitude: f64,
    /// Log time-scale delay.
    pub mu: f64,
    /// Log response time.
    pub sigma: f64,
    /// Occurrence time (s).
    pub t0: f64,
}

impl StrokeLognormal {
    /// Speed at time t; zero at or before the occurrence time.
    pub fn speed(&self, t: f64) -> f64 {
        let dt = t - self.t0;
        if dt <= 0.0 {
            return 0.0;
        }
        let z = (dt.ln() - self.mu) / self.sigma;
        self.amplitude / (self.sigma * (2.0 * PI).sqrt() * dt) * (-0.5 * z * z).exp()
    }

    /// Distance travelled by time t (the lognormal CDF scaled by D).
    pub fn distance(&self, t: f64) -> f64 {
        let dt = t - self.t0;
        if dt <= 0.0 {
            return 0.0;
        }
        let arg = (dt.ln() - self.mu) / (SQRT_2 * self.sigma);
        self.amplitude / 2.0 * (1.0 + statrs::function::erf::erf(arg))
    }

    /// Time at which `dist` of the stroke has been travelled; the inverse of
    /// `distance`. Endpoints map to +-infinity and are rejected.
    pub fn arc_time(&self, dist: f64) -> Result<f64> {
        if !(dist > 0.0 && dist < self.amplitude) {
            return Err(Error::InvalidInput(format!(
                "arc distance {dist} outside (0, {})",
                self.amplitude
            )));
        }
        let u = 2.0 * dist / self.amplitude - 1.0;
        Ok(self.t0 + (SQRT_2 * self.sigma * erf_inv(u) + self.mu).exp())
    }

    /// Mode of the pulse: t0 + exp(mu - sigma^2).
    pub fn peak_time(&self) -> f64 {
        self.t0 + (self.mu - self.sigma * self.sigma).exp()
    }

    /// Start of the stroke's nominal support (0.1% quantile).
    pub fn support_start(&self) -> f64 {
        self.t0 + (self.mu - z_mass() * self.sigma).exp()
    }

    /// End of the stroke's nominal support (99.9% quantile).
    pub fn support_end(&self) -> f64 {
        self.t0 + (self.mu + z_mass() * self.sigma).exp()
    }
}

/// Closed-form lognormal skewness as a function of sigma.
pub fn lognormal_skewness(sigma: f64) -> f64 {
    let w = (sigma * sigma).exp();
    (w + 2.0) * (w - 1.0).sqrt()
}

/// Closed-form non-excess lognormal kurtosis as a function of sigma.
pub fn lognormal_kurtosis(sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    (4.0 * s2).exp() + 2.0 * (3.0 * s2).exp() + 3.0 * (2.0 * s2).exp() - 3.0
}

/// Sigma whose lognormal skewness equals `target`, by bisection.
pub fn sigma_for_skewness(target: f64) -> f64 {
    let (mut lo, mut hi) = (1e-9, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lognormal_skewness(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest sigma satisfying both shape windows (the skewness bound binds
/// first: ~0.09946).
pub fn max_feasible_sigma() -> f64 {
    static S: OnceLock<f64> = OnceLock::new();
    *S.get_or_init(|| {
        let s = sigma_for_skewness(SKEWNESS_WINDOW.1);
        debug_assert!(lognormal_kurtosis(s) <= KURTOSIS_WINDOW.1);
        s
    })
}

/// Synthesizes one stroke pulse: sigma drawn in `sigma_range` and refined
/// into the shape windows, mu set so the 0.1%-99.9% mass spans exactly
/// [start_time, start_time + duration], t0 shifted so the pulse onset sits
/// at the stroke start. The speed peak then falls at or left of the
/// stroke's temporal centre.
pub fn synth_stroke_lognormal<R: Rng + ?Sized>(
    arc_length: f64,
    duration: f64,
    start_time: f64,
    sigma_range: (f64, f64),
    min_duration: f64,
    rng: &mut R,
) -> Result<StrokeLognormal> {
    if !(arc_length > 0.0) {
        return Err(Error::InvalidParameter(format!("arc length {arc_length} must be positive")));
    }
    if duration + 1e-12 < min_duration {
        return Err(Error::DegenerateStroke { duration, min: min_duration });
    }
    let lo = sigma_range.0.max(1e-4);
    let hi = sigma_range.1.max(lo);
    let mut sigma = lo + (hi - lo) * rng.gen::<f64>();
    // Iterative refinement: shrink until both moment windows hold.
    for _ in 0..200 {
        let skew_ok = lognormal_skewness(sigma) <= SKEWNESS_WINDOW.1;
        let kurt_ok = lognormal_kurtosis(sigma) <= KURTOSIS_WINDOW.1;
        if skew_ok && kurt_ok {
            break;
        }
        sigma *= 0.95;
    }
    let z = z_mass();
    let span = (z * sigma).exp() - (-z * sigma).exp();
    let mu = (duration / span).ln();
    let t0 = start_time - (mu - z * sigma).exp();
    let stroke = StrokeLognormal { amplitude: arc_length, mu, sigma, t0 };
    debug_assert!(stroke.peak_time() <= start_time + duration / 2.0 + 1e-9);
    Ok(stroke)
}
