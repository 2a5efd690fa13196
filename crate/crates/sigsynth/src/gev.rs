//! Generalized extreme value distribution with truncation bounds.
//!
//! Morphological signature parameters (letter count, slant, skew, text size,
//! writing speed) are each modelled by a GEV restricted to an observed
//! [min, max] range:
//!
//! ```text
//! f(x | xi, mu, sigma) = (1/sigma) t(x)^(xi+1) e^(-t(x))
//! t(x) = (1 + xi (x - mu)/sigma)^(-1/xi)   (xi != 0)
//!      = e^(-(x - mu)/sigma)               (xi == 0)
//! ```

use crate::{Error, Result};
use rand::distributions::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// |xi| below this uses the Gumbel (xi = 0) branch.
const XI_ZERO_EPS: f64 = 1e-12;

/// Minimum truncation mass before the bounds are declared unreachable.
const MIN_ACCEPT_MASS: f64 = 1e-6;

/// GEV shape/scale/location plus truncation bounds, as loaded from the
/// per-script parameter table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GevParams {
    pub xi: f64,
    pub sigma: f64,
    pub mu: f64,
    pub min: f64,
    pub max: f64,
}

impl GevParams {
    pub fn new(xi: f64, sigma: f64, mu: f64, min: f64, max: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "GEV scale must be positive and finite, got {sigma}"
            )));
        }
        if !xi.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "GEV shape/location must be finite, got xi={xi} mu={mu}"
            )));
        }
        if !(min < max) {
            return Err(Error::InvalidParameter(format!(
                "GEV truncation bounds must satisfy min < max, got [{min}, {max}]"
            )));
        }
        Ok(GevParams { xi, sigma, mu, min, max })
    }

    fn t(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        if self.xi.abs() < XI_ZERO_EPS {
            (-z).exp()
        } else {
            let arg = 1.0 + self.xi * z;
            if arg <= 0.0 {
                // Outside the support: t -> +inf below a heavy lower bound
                // (xi > 0), t -> 0 above a bounded upper tail (xi < 0).
                if self.xi > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            } else {
                arg.powf(-1.0 / self.xi)
            }
        }
    }

    /// Density of the untruncated GEV; 0 outside the support.
    pub fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        if self.xi.abs() >= XI_ZERO_EPS && 1.0 + self.xi * z <= 0.0 {
            return 0.0;
        }
        let t = self.t(x);
        t.powf(self.xi + 1.0) * (-t).exp() / self.sigma
    }

    /// Cumulative distribution of the untruncated GEV, `exp(-t(x))`.
    pub fn cdf(&self, x: f64) -> f64 {
        (-self.t(x)).exp()
    }

    /// Inverse CDF for u in (0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        debug_assert!(u > 0.0 && u < 1.0);
        let lnu = -u.ln(); // -ln u > 0
        if self.xi.abs() < XI_ZERO_EPS {
            self.mu - self.sigma * lnu.ln()
        } else {
            self.mu + self.sigma * (lnu.powf(-self.xi) - 1.0) / self.xi
        }
    }

    /// CDF of the truncated distribution on [min, max].
    pub fn truncated_cdf(&self, x: f64) -> f64 {
        let lo = self.cdf(self.min);
        let hi = self.cdf(self.max);
        ((self.cdf(x.clamp(self.min, self.max)) - lo) / (hi - lo)).clamp(0.0, 1.0)
    }

    /// Draw from the GEV restricted to [min, max] by rejection sampling, so
    /// the in-range density shape is exact (no clamping).
    pub fn sample_truncated<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let mass = self.cdf(self.max) - self.cdf(self.min);
        if !(mass >= MIN_ACCEPT_MASS) {
            return Err(Error::UnreachableSupport { min: self.min, max: self.max, mass });
        }
        // Expected tries is 1/mass <= 1e6; the cap only guards against a
        // catastrophically unlucky stream.
        let cap = (200.0 / mass).ceil() as u64;
        for _ in 0..cap {
            let u: f64 = rng.sample(Open01);
            let x = self.quantile(u);
            if x >= self.min && x <= self.max {
                return Ok(x);
            }
        }
        Err(Error::UnreachableSupport { min: self.min, max: self.max, mass })
    }
}
