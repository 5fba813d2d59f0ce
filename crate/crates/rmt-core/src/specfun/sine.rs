//! Sine integral and its tail.

use crate::quad;

/// `Si(x) = int_0^x sin(t)/t dt`.
///
/// Maclaurin series for small `x`, composite Gauss-Legendre panels beyond
/// (the integrand is entire, so fixed panels of length pi are accurate to
/// machine precision).
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x <= 4.0 {
        // Si(x) = sum_k (-1)^k x^(2k+1) / ((2k+1) (2k+1)!)
        let x2 = x * x;
        let mut p = x; // (-1)^k x^(2k+1) / (2k+1)!
        let mut sum = x;
        for k in 1..=60 {
            p *= -x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            let c = p / (2 * k + 1) as f64;
            sum += c;
            if c.abs() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        let (nodes, weights) = quad::gauss_legendre(24);
        let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
        let mut acc = 0.0;
        let mut a = 0.0;
        let panel = std::f64::consts::PI;
        while a < x {
            let b = (a + panel).min(x);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut s = 0.0;
            for (n, w) in nodes.iter().zip(&weights) {
                s += w * sinc(mid + half * n);
            }
            acc += half * s;
            a = b;
        }
        acc
    }
}

/// `int_x^infty sin(z)/z dz = pi/2 - Si(x)`, for `x > 0`.
pub fn sine_tail(x: f64) -> f64 {
    assert!(x > 0.0, "sine_tail requires x > 0");
    std::f64::consts::FRAC_PI_2 - sine_integral(x)
}
