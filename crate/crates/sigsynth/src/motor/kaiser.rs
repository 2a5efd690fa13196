//! Kaiser inertial filter kernel and the order-zero modified Bessel
//! function it is built on.

use crate::{Error, Result};

/// I0(x) by power series, summed to machine precision.
pub fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 1.0f64;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < sum * 1e-17 {
            return sum;
        }
        k += 1.0;
    }
}

/// Symmetric Kaiser window coefficients
/// `h(n) = I0(pi * beta * sqrt(1 - (2n/N - 1)^2))` for `0 <= n <= N`,
/// normalized to unit sum. Returns N + 1 coefficients; with N even the
/// kernel has a centre tap.
pub fn kaiser_kernel(n_len: usize, beta: f64) -> Result<Vec<f64>> {
    if n_len < 1 {
        return Err(Error::InvalidParameter(format!("Kaiser filter length {n_len} < 1")));
    }
    let n = n_len as f64;
    // Compute the left half and mirror it so h(n) = h(N - n) holds exactly.
    let mut h = vec![0.0f64; n_len + 1];
    for i in 0..=n_len / 2 {
        let u = 2.0 * i as f64 / n - 1.0;
        let c = bessel_i0(std::f64::consts::PI * beta * (1.0 - u * u).max(0.0).sqrt());
        h[i] = c;
        h[n_len - i] = c;
    }
    let sum: f64 = h.iter().sum();
    for c in &mut h {
        *c /= sum;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::adaptive_simpson;

    #[test]
    fn beta_zero_is_a_moving_average() {
        let h = kaiser_kernel(4, 0.0).unwrap();
        assert_eq!(h.len(), 5);
        for c in &h {
            assert!((c - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn bessel_series_matches_quadrature() {
        // I0(x) = (1/pi) * integral_0^pi exp(x cos t) dt.
        for x in [0.1, 0.3141592653589793, 1.0, 3.7] {
            let oracle = adaptive_simpson(
                &|t: f64| (x * t.cos()).exp(),
                0.0,
                std::f64::consts::PI,
                1e-13,
                40,
            ) / std::f64::consts::PI;
            let series = bessel_i0(x);
            assert!((series - oracle).abs() < 1e-11, "x={x}: {series} vs {oracle}");
        }
    }

    #[test]
    fn center_to_edge_ratio_for_small_window() {
        // N = 2, beta = 0.1: raw taps [I0(0), I0(0.1 pi), I0(0)].
        let h = kaiser_kernel(2, 0.1).unwrap();
        let ratio = h[1] / h[0];
        let expect = bessel_i0(0.1 * std::f64::consts::PI);
        assert!((ratio - expect).abs() < 1e-12);
        // Frozen from the quadrature oracle: I0(0.1 pi) = 1.0248266...
        assert!((expect - 1.0248266).abs() < 1e-6);
    }

    #[test]
    fn kernels_are_positive_symmetric_and_normalized() {
        for n in [1usize, 2, 8, 25, 101] {
            for beta in [0.0, 0.1, 2.5] {
                let h = kaiser_kernel(n, beta).unwrap();
                assert_eq!(h.len(), n + 1);
                let sum: f64 = h.iter().sum();
                assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
                for i in 0..h.len() {
                    assert!(h[i] > 0.0);
                    assert_eq!(h[i].to_bits(), h[n - i].to_bits(), "asymmetric at {i}");
                }
            }
        }
    }

    #[test]
    fn zero_length_is_rejected() {
        assert!(kaiser_kernel(0, 0.1).is_err());
    }
}
