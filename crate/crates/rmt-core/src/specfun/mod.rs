//! Special functions used throughout the crate.
//!
//! Conventions: Hermite polynomials are the physicists' family (weight
//! `e^{-x^2}`), matching the generating recursion
//! `H_n(x) - 2x H_{n-1}(x) + 2(n-1) H_{n-2}(x) = 0`. Downstream formulas use
//! barred variables (`lambda * sqrt(N/2)` for GUE, `lambda * sqrt(N)` for
//! GOE); each caller documents which scaling it passes.

mod airy;
mod bessel;
mod gamma;
mod sine;

pub use airy::{airy_ai, AiryAi};
pub use bessel::{
    bessel_i0_partial, bessel_j, bessel_j_half, i0_asymptotic_coefficient, SinCosForm,
};
pub use gamma::{erf, ln_gamma};
pub use sine::{sine_integral, sine_tail};

use crate::quad;

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recursion.
///
/// Total function; exact for polynomial inputs up to floating rounding.
pub fn hermite_h(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * x,
        _ => {
            let mut hm2 = 1.0;
            let mut hm1 = 2.0 * x;
            for m in 2..=n {
                // H_m = 2x H_{m-1} - 2(m-1) H_{m-2}
                let h = 2.0 * x * hm1 - 2.0 * (m as f64 - 1.0) * hm2;
                hm2 = hm1;
                hm1 = h;
            }
            hm1
        }
    }
}

/// Normalised oscillator function
/// `phi_n(x) = (2^n n! sqrt(pi))^{-1/2} e^{-x^2/2} H_n(x)`.
///
/// Computed by the stable recursion on the normalised family,
/// `phi_n = sqrt(2/n) x phi_{n-1} - sqrt((n-1)/n) phi_{n-2}`, so it does not
/// overflow for large `n` (validated up to n = 500).
pub fn hermite_phi(n: u32, x: f64) -> f64 {
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return phi0;
    }
    let mut pm2 = phi0;
    let mut pm1 = std::f64::consts::SQRT_2 * x * phi0;
    if n == 1 {
        return pm1;
    }
    for m in 2..=n {
        let mf = m as f64;
        let p = (2.0 / mf).sqrt() * x * pm1 - ((mf - 1.0) / mf).sqrt() * pm2;
        pm2 = pm1;
        pm1 = p;
    }
    pm1
}

/// Derivative `phi_n'(x)`, via `phi_n' = sqrt(2n) phi_{n-1} - x phi_n`.
pub fn hermite_phi_prime(n: u32, x: f64) -> f64 {
    if n == 0 {
        return -x * hermite_phi(0, x);
    }
    (2.0 * n as f64).sqrt() * hermite_phi(n - 1, x) - x * hermite_phi(n, x)
}

/// The incomplete-Gaussian combination `B(x) = e^{-x^2/2} int_0^x e^{-y^2/2} dy`.
///
/// Odd in `x`. Evaluated through the error function,
/// `int_0^x e^{-y^2/2} dy = sqrt(pi/2) erf(x/sqrt(2))`.
pub fn incomplete_gaussian_b(x: f64) -> f64 {
    (-0.5 * x * x).exp() * std::f64::consts::FRAC_PI_2.sqrt() * erf(x / std::f64::consts::SQRT_2)
}

/// `int_0^mu phi_n(t) dt` by adaptive quadrature (used by the GOE kernel).
pub fn hermite_phi_integral(n: u32, mu: f64) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    quad::integrate(|t| hermite_phi(n, t), 0.0, mu, 1e-12, 1e-11)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_base_cases() {
        assert_eq!(hermite_h(0, 3.7), 1.0);
        assert_eq!(hermite_h(1, 2.0), 4.0);
    }

    #[test]
    fn hermite_h3_matches_closed_form() {
        // oracle: H_3(x) = 8x^3 - 12x from the recursion
        let h3 = |x: f64| 8.0 * x.powi(3) - 12.0 * x;
        assert_eq!(hermite_h(3, 1.0), -4.0);
        for &x in &[0.1, 0.5, 2.5, -1.3] {
            assert!((hermite_h(3, x) - h3(x)).abs() < 1e-12 * h3(x).abs().max(1.0));
        }
    }

    #[test]
    fn hermite_recursion_holds_at_high_order() {
        for n in 2..=30 {
            for &x in &[0.25, 1.0, 3.5] {
                let lhs =
                    hermite_h(n, x) - 2.0 * x * hermite_h(n - 1, x) + 2.0 * (n as f64 - 1.0) * hermite_h(n - 2, x);
                assert!(lhs.abs() < 1e-6 * hermite_h(n, x).abs().max(1.0));
            }
        }
    }

    #[test]
    fn phi_values_at_origin() {
        assert!((hermite_phi(0, 0.0) - std::f64::consts::PI.powf(-0.25)).abs() < 1e-14);
        assert_eq!(hermite_phi(1, 0.0), 0.0);
    }

    #[test]
    fn phi_is_normalised() {
        for &n in &[0u32, 5, 20] {
            let norm = quad::integrate(
                |x: f64| {
                    let p = hermite_phi(n, x);
                    p * p
                },
                -25.0,
                25.0,
                1e-13,
                1e-12,
            );
            assert!((norm - 1.0).abs() < 1e-10, "n={n} norm={norm}");
        }
    }

    #[test]
    fn phi_orthonormal_up_to_20() {
        for m in (0u32..=20).step_by(5) {
            for n in (0u32..=20).step_by(4) {
                let ip = quad::integrate(
                    |x: f64| hermite_phi(m, x) * hermite_phi(n, x),
                    -25.0,
                    25.0,
                    1e-13,
                    1e-12,
                );
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-10, "m={m} n={n} ip={ip}");
            }
        }
    }

    #[test]
    fn phi_no_overflow_at_n_500() {
        let v = hermite_phi(500, 1.0);
        assert!(v.is_finite());
        assert!(v.abs() < 1.0);
    }

    #[test]
    fn b_function_odd_and_zero_at_origin() {
        assert_eq!(incomplete_gaussian_b(0.0), 0.0);
        for &x in &[0.5, 1.0, 3.0] {
            let b = incomplete_gaussian_b(x);
            assert!((incomplete_gaussian_b(-x) + b).abs() < 1e-14);
        }
    }

    #[test]
    fn b_function_matches_direct_quadrature() {
        for &x in &[0.3f64, 1.0, 2.0] {
            let oracle = (-0.5 * x * x).exp()
                * quad::integrate(|y: f64| (-0.5 * y * y).exp(), 0.0, x, 1e-13, 1e-13);
            assert!((incomplete_gaussian_b(x) - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_prime_matches_finite_difference() {
        let h = 1e-6;
        for &n in &[0u32, 3, 11] {
            for &x in &[0.2, 1.7] {
                let fd = (hermite_phi(n, x + h) - hermite_phi(n, x - h)) / (2.0 * h);
                assert!((hermite_phi_prime(n, x) - fd).abs() < 1e-7);
            }
        }
    }
}
