//! Exact finite-N formulas for characteristic-polynomial averages: ratio
//! formulas for the unitary and orthogonal ensembles, the orthogonal kernel
//! S_N, and symplectic moments. These serve as oracles for the Monte Carlo
//! estimators and as the finite-N side of the scaling limits.
//!
//! Conventions (fixed by calibration against direct eigenvalue-measure
//! quadrature; see the module tests):
//!
//! * All ratios are normalized so that `F(lambda, mu -> lambda) = 1`.
//! * Unitary (beta = 2): weight `exp(-(N/2) Tr X^2)` (`weight_scale = 1`),
//!   scaled variable `lambda_bar = lambda sqrt(N/2)`.
//! * Orthogonal (beta = 1): same weight, `lambda_bar = lambda sqrt(N)`.
//! * Symplectic (beta = 4): weight `exp(-N Tr X^2)` (`weight_scale = 2`),
//!   `mu_bar = mu sqrt(N)`.
//!
//! With this normalization the finite-N density of states is
//! `rho(lambda) = (1/(pi N)) d/dmu Im F(lambda, mu)|_{mu = lambda}`
//! (sign fixed against the Christoffel-Darboux kernel; see tests).

use num_complex::Complex64;

use crate::quad::integrate;
use crate::specfun::{hermite_h, hermite_phi, hermite_phi_integral, incomplete_gaussian_b};
use crate::RmtError;

const SQRT_PI: f64 = 1.772_453_850_905_516;

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Hermite polynomial of a complex argument, by the three-term recurrence.
fn hermite_h_complex(n: u32, z: Complex64) -> Complex64 {
    let mut h0 = Complex64::new(1.0, 0.0);
    if n == 0 {
        return h0;
    }
    let mut h1 = 2.0 * z;
    for k in 1..n {
        let h2 = 2.0 * z * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// contour shift used for near-real `mu`: integrands are analytic in the
/// lower half of the `b` plane (all poles sit at `Im b = Im mu_bar > 0`),
/// so the real-axis integral equals the shifted one and stays smooth even
/// at `Im mu = 1e-6`
const CONTOUR_SHIFT: f64 = 0.5;

fn check_mu(mu: Complex64, who: &str) -> Result<(), RmtError> {
    if mu.im <= 0.0 {
        return Err(RmtError::Domain(format!("{who}: Im mu > 0 required")));
    }
    Ok(())
}

/// Unitary-ensemble ratio `< det(lambda - X) / det(mu - X) >` at finite N:
/// a single Gaussian integral against a Hermite-polynomial bracket.
pub fn gue_ratio(lambda: f64, mu: Complex64, n: u32) -> Result<Complex64, RmtError> {
    if n == 0 {
        return Err(RmtError::InvalidParameter("gue_ratio: N >= 1".into()));
    }
    check_mu(mu, "gue_ratio")?;
    let scale = (n as f64 / 2.0).sqrt();
    let lb = lambda * scale;
    let mb = mu * scale;
    let cutoff = 9.0 + (n as f64).sqrt();
    let pref = 1.0 / (2f64.powi(n as i32) * SQRT_PI * factorial(n - 1));
    let val = integrate(
        |t| {
            let b = Complex64::new(t, -CONTOUR_SHIFT);
            let bracket = hermite_h(n, lb) * hermite_h_complex(n - 1, b)
                - hermite_h(n - 1, lb) * hermite_h_complex(n, b);
            (-b * b).exp() / (mb - b) * bracket
        },
        -cutoff,
        cutoff,
        1e-12,
        1e-10,
    );
    Ok(pref * val)
}

/// Boundary value `Im F_N(lambda, mu + i0)` for the unitary ensemble, in
/// closed form.
pub fn gue_ratio_im(lambda: f64, mu: f64, n: u32) -> f64 {
    assert!(n >= 1);
    let scale = (n as f64 / 2.0).sqrt();
    let lb = lambda * scale;
    let mb = mu * scale;
    -SQRT_PI / (2f64.powi(n as i32) * factorial(n - 1))
        * (-mb * mb).exp()
        * (hermite_h(n, lb) * hermite_h(n - 1, mb) - hermite_h(n - 1, lb) * hermite_h(n, mb))
}

/// Finite-N unitary density of states,
/// `rho(lambda) = (1/(pi N)) d/dmu Im F_N(lambda, mu)|_{mu=lambda}`,
/// from the analytic derivative of [`gue_ratio_im`].
pub fn gue_density(lambda: f64, n: u32) -> f64 {
    assert!(n >= 1);
    let scale = (n as f64 / 2.0).sqrt();
    let x = lambda * scale;
    // d/dmu_bar of the closed form at mu_bar = lambda_bar; the bracket
    // itself vanishes there, so only the bracket derivative survives:
    // H'_k = 2k H_{k-1}
    let dbracket = hermite_h(n, x) * 2.0 * (n as f64 - 1.0) * hermite_h(n.saturating_sub(2), x)
        - hermite_h(n - 1, x) * 2.0 * n as f64 * hermite_h(n - 1, x);
    let d_im = -SQRT_PI / (2f64.powi(n as i32) * factorial(n - 1)) * (-x * x).exp() * dbracket;
    (1.0 / (std::f64::consts::PI * n as f64)) * d_im * scale
}

/// Orthogonal-ensemble ratio at finite even N, by nested quadrature over
/// the Gaussian variable `b` and the radial variable `rho`.
pub fn goe_ratio_quadrature(lambda: f64, mu: Complex64, n: u32) -> Result<Complex64, RmtError> {
    if n == 0 || n % 2 != 0 {
        return Err(RmtError::InvalidParameter(format!(
            "goe_ratio_quadrature: N must be a positive even integer, got {n}"
        )));
    }
    check_mu(mu, "goe_ratio_quadrature")?;
    let scale = (n as f64).sqrt();
    let lb = lambda * scale;
    let mb = mu * scale;
    let cutoff = 9.0 + (n as f64).sqrt();
    let half = n / 2;
    let c1 = -(n as f64 - 1.0) / (2f64.powi(n as i32 - 1) * std::f64::consts::PI * SQRT_PI)
        * hermite_h(n - 2, lb);
    let term1 = integrate(
        |t| {
            let b = Complex64::new(t, -CONTOUR_SHIFT);
            (-b * b).exp() / (mb - b).powi(n as i32)
        },
        -cutoff,
        cutoff,
        1e-13,
        1e-11,
    );
    let c2 = 1.0 / (2f64.powi(n as i32 - 1) * std::f64::consts::PI * SQRT_PI)
        * hermite_h(n - 1, lb);
    let term2 = integrate(
        |t| {
            let b = Complex64::new(t, -CONTOUR_SHIFT);
            let d2 = (mb - b) * (mb - b);
            let inner = integrate(
                |r| (-r).exp() / (d2 - r).powi(half as i32),
                0.0,
                45.0,
                1e-13,
                1e-11,
            );
            (-b * b).exp() * (lb - 2.0 * b) * inner
        },
        -cutoff,
        cutoff,
        1e-13,
        1e-11,
    );
    // the overall factor pi normalizes F(mu -> lambda) to 1; it is fixed
    // against the direct 2D eigenvalue integral (see tests)
    Ok(std::f64::consts::PI * (c1 * term1 + c2 * term2))
}

/// Boundary value `Im F_2(lambda, mu + i0)` for the orthogonal ensemble, in
/// closed form with the incomplete-Gaussian function B. The B-term carries
/// a plus sign: that is the sign consistent with the S_2-kernel identity
/// and with the quadrature of the ratio formula.
pub fn goe_im_f2(lambda: f64, mu: f64) -> f64 {
    let lb = lambda * std::f64::consts::SQRT_2;
    let mb = mu * std::f64::consts::SQRT_2;
    SQRT_PI
        * ((mb - lb) * (-mb * mb).exp() + lb * (mb - lb) * incomplete_gaussian_b(mb))
}

/// Boundary value `Im F_4(lambda, mu + i0)` for the orthogonal ensemble.
/// Calibrated against the ratio quadrature: relative to a naive integration
/// by parts, the second term enters with a minus sign and the B-term inside
/// it with a plus sign.
pub fn goe_im_f4(lambda: f64, mu: f64) -> f64 {
    let lb = lambda * 2.0;
    let mb = mu * 2.0;
    let a = (1.0 / 16.0)
        * (-mb * mb).exp()
        * (hermite_h(2, lb) * hermite_h(3, mb) - hermite_h(3, lb) * hermite_h(2, mb));
    let c = (1.0 / 8.0)
        * (mb - lb)
        * hermite_h(3, lb)
        * (2.0 * mb * (-mb * mb).exp() - incomplete_gaussian_b(mb));
    SQRT_PI * (a - c)
}

/// The orthogonal-ensemble kernel diagonal piece
/// `S_N(x, y) = sum_{i<N} phi_i(x) phi_i(y)
///   + sqrt(N/2) phi_{N-1}(x) int_0^y phi_N`.
/// Arguments are in the scaled variable (`lambda_bar = lambda sqrt(N)`).
pub fn goe_kernel_sn(x: f64, y: f64, n: u32) -> Result<f64, RmtError> {
    if n == 0 || n % 2 != 0 {
        return Err(RmtError::InvalidParameter(format!(
            "goe_kernel_sn: N must be a positive even integer, got {n}"
        )));
    }
    let sum: f64 = (0..n).map(|i| hermite_phi(i, x) * hermite_phi(i, y)).sum();
    Ok(sum + (n as f64 / 2.0).sqrt() * hermite_phi(n - 1, x) * hermite_phi_integral(n, y))
}

/// Finite-N orthogonal density of states `rho(lambda) =
/// S_N(lambda_bar, lambda_bar) / sqrt(N)` (normalization fixed by the
/// ratio-formula calibration; see tests).
pub fn goe_density(lambda: f64, n: u32) -> Result<f64, RmtError> {
    let x = lambda * (n as f64).sqrt();
    Ok(goe_kernel_sn(x, x, n)? / (n as f64).sqrt())
}

/// Symplectic-ensemble inverse moment `< 1 / det(mu - X') >` over the
/// doubled 2N x 2N representation, as a normalized single Gaussian integral.
pub fn gse_inverse_moment(mu: Complex64, n: u32) -> Result<Complex64, RmtError> {
    if n == 0 {
        return Err(RmtError::InvalidParameter("gse_inverse_moment: N >= 1".into()));
    }
    check_mu(mu, "gse_inverse_moment")?;
    let nf = n as f64;
    let cutoff = 8.0 / nf.sqrt() + 2.0;
    let val = integrate(
        |t| {
            let b = Complex64::new(t, -CONTOUR_SHIFT);
            (-nf * b * b).exp() / (mu - b).powi(2 * n as i32)
        },
        -cutoff,
        cutoff,
        1e-13,
        1e-11,
    );
    Ok((nf / std::f64::consts::PI).sqrt() * val)
}

/// Closed form of the boundary value `Im < 1/det(mu - X') >` as `Im mu -> 0+`:
/// proportional to `H_{2N-1}(mu sqrt(N)) e^{-N mu^2}`.
pub fn gse_inverse_moment_im(mu: f64, n: u32) -> f64 {
    assert!(n >= 1);
    let nf = n as f64;
    let mb = mu * nf.sqrt();
    -SQRT_PI * nf.powi(n as i32) / factorial(2 * n - 1)
        * hermite_h(2 * n - 1, mb)
        * (-mb * mb).exp()
}

/// Symplectic-ensemble moment `< det(lambda - X)^2 >` via the dual
/// three-dimensional integral over a 2 x 2 real symmetric matrix A:
/// `(1/Z) int dA det(lambda - iA)^N exp(-(N/2) Tr A^2)`. The factor `i`
/// in the determinant is required for the duality to hold (checked against
/// Gaussian moments and Monte Carlo; the real-A form fails already at N=1).
pub fn gse_det2_moment(lambda: f64, n: u32) -> Result<f64, RmtError> {
    if n == 0 {
        return Err(RmtError::InvalidParameter("gse_det2_moment: N >= 1".into()));
    }
    let nf = n as f64;
    let (nodes, weights) = crate::quad::gauss_hermite(48);
    // substitutions a11 = sqrt(2/N) x, a22 = sqrt(2/N) y, a12 = sqrt(1/N) z
    // turn the weight into exp(-x^2 - y^2 - z^2); the Jacobian cancels in
    // the normalized average
    let s_d = (2.0 / nf).sqrt();
    let s_o = (1.0 / nf).sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut norm = 0.0;
    for (&x, &wx) in nodes.iter().zip(&weights) {
        for (&y, &wy) in nodes.iter().zip(&weights) {
            for (&z, &wz) in nodes.iter().zip(&weights) {
                let a11 = s_d * x;
                let a22 = s_d * y;
                let a12 = s_o * z;
                let det = (Complex64::new(lambda, -a11)) * (Complex64::new(lambda, -a22))
                    + a12 * a12;
                let w = wx * wy * wz;
                acc += det.powi(n as i32) * w;
                norm += w;
            }
        }
    }
    let val = acc / norm;
    debug_assert!(val.im.abs() < 1e-9 * (1.0 + val.re.abs()));
    Ok(val.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_spectrum, task_seed, EnsembleSpec};
    use crate::quad::integrate;

    // ---------- GUE ratio ----------

    #[test]
    fn gue_normalization_mu_to_lambda() {
        for &n in &[2u32, 4, 7] {
            let lam = 0.3;
            let err1 = (gue_ratio(lam, Complex64::new(lam, 1e-3), n).unwrap()
                - Complex64::new(1.0, 0.0))
            .norm();
            let err2 = (gue_ratio(lam, Complex64::new(lam, 5e-4), n).unwrap()
                - Complex64::new(1.0, 0.0))
            .norm();
            assert!(err1 < 0.02, "N={n}: err {err1}");
            assert!(err2 < err1, "N={n}: error should shrink with eps");
        }
    }

    #[test]
    fn gue_im_matches_quadrature_at_small_eps() {
        for &(lam, mu) in &[(0.3, 0.8), (-0.5, 0.2), (0.0, 1.1)] {
            for &n in &[2u32, 4, 6] {
                let quad_im = gue_ratio(lam, Complex64::new(mu, 1e-6), n).unwrap().im;
                let closed = gue_ratio_im(lam, mu, n);
                assert!(
                    (quad_im - closed).abs() < 2e-5 * (1.0 + closed.abs()),
                    "N={n} lam={lam} mu={mu}: {quad_im} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn gue_n2_matches_direct_eigenvalue_integral() {
        // brute-force 2D oracle: joint density (t1-t2)^2 exp(-(t1^2+t2^2))
        // (the weight exp(-(N/2) Tr X^2) at N = 2)
        let lam = 0.0;
        let mu = Complex64::new(0.5, 0.05);
        let dens = |t1: f64, t2: f64| (t1 - t2) * (t1 - t2) * (-(t1 * t1 + t2 * t2)).exp();
        let z = integrate(
            |t1| integrate(|t2| dens(t1, t2), -7.0, 7.0, 1e-12, 1e-12),
            -7.0,
            7.0,
            1e-12,
            1e-12,
        );
        let num = integrate(
            |t1| {
                integrate(
                    |t2| {
                        dens(t1, t2) * (lam - t1) * (lam - t2)
                            / ((mu - t1) * (mu - t2))
                    },
                    -7.0,
                    7.0,
                    1e-12,
                    1e-12,
                )
            },
            -7.0,
            7.0,
            1e-12,
            1e-12,
        );
        let oracle = num / z;
        let got = gue_ratio(lam, mu, 2).unwrap();
        assert!((got - oracle).norm() < 1e-8, "{got} vs {oracle}");
    }

    #[test]
    fn gue_im_vanishes_on_diagonal_and_bracket_antisymmetric() {
        for &n in &[2u32, 5] {
            assert!(gue_ratio_im(0.7, 0.7, n).abs() < 1e-14);
        }
        // bracket antisymmetry: Im F(lambda, mu) with swapped scaled args
        // flips sign of the bracket; the Gaussian prefactor differs, so test
        // the bracket directly
        let (a, b) = (0.4, 1.2);
        let br = |x: f64, y: f64, n: u32| {
            hermite_h(n, x) * hermite_h(n - 1, y) - hermite_h(n - 1, x) * hermite_h(n, y)
        };
        assert!((br(a, b, 5) + br(b, a, 5)).abs() < 1e-12 * br(a, b, 5).abs().max(1.0));
    }

    #[test]
    fn gue_density_matches_christoffel_darboux() {
        // oracle: rho(lambda) = K_N(x, x) sqrt(N/2) / N with x = lambda
        // sqrt(N/2) and K_N the orthonormal-wavefunction kernel
        for &n in &[2u32, 4, 8] {
            for &lam in &[0.0, 0.4, -0.9] {
                let x = lam * (n as f64 / 2.0).sqrt();
                let kernel: f64 = (0..n).map(|i| hermite_phi(i, x).powi(2)).sum();
                let oracle = kernel * (n as f64 / 2.0).sqrt() / n as f64;
                let got = gue_density(lam, n);
                assert!(
                    (got - oracle).abs() < 1e-8,
                    "N={n} lam={lam}: {got} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn gue_quadrature_stable_under_tolerance_tightening() {
        let v1 = gue_ratio(0.3, Complex64::new(0.9, 0.01), 6).unwrap();
        // same integral at much tighter tolerance
        let scale = (6f64 / 2.0).sqrt();
        let lb = 0.3 * scale;
        let mb = Complex64::new(0.9, 0.01) * scale;
        let pref = 1.0 / (2f64.powi(6) * SQRT_PI * factorial(5));
        let v2 = pref
            * integrate(
                |t| {
                    let b = Complex64::new(t, -CONTOUR_SHIFT);
                    let bracket = hermite_h(6, lb) * hermite_h_complex(5, b)
                        - hermite_h(5, lb) * hermite_h_complex(6, b);
                    (-b * b).exp() / (mb - b) * bracket
                },
                -12.0,
                12.0,
                1e-15,
                1e-14,
            );
        assert!((v1 - v2).norm() < 1e-8 * v2.norm());
    }

    // ---------- GOE ratio ----------

    #[test]
    fn goe_rejects_bad_input() {
        assert!(goe_ratio_quadrature(0.1, Complex64::new(0.5, 0.1), 3).is_err());
        assert!(goe_ratio_quadrature(0.1, Complex64::new(0.5, -0.1), 2).is_err());
    }

    #[test]
    fn goe_normalization_mu_to_lambda() {
        for &n in &[2u32, 4] {
            let lam = 0.25;
            let f = goe_ratio_quadrature(lam, Complex64::new(lam, 1e-3), n).unwrap();
            assert!((f - Complex64::new(1.0, 0.0)).norm() < 0.03, "N={n}: {f}");
        }
    }

    #[test]
    fn goe_n2_matches_direct_eigenvalue_integral() {
        // joint density |t1-t2| exp(-(t1^2+t2^2))
        let lam = 0.3;
        let mu = Complex64::new(0.7, 0.05);
        let dens = |t1: f64, t2: f64| (t1 - t2).abs() * (-(t1 * t1 + t2 * t2)).exp();
        let z = integrate(
            |t1| integrate(|t2| dens(t1, t2), -7.0, 7.0, 1e-11, 1e-11),
            -7.0,
            7.0,
            1e-11,
            1e-11,
        );
        let num = integrate(
            |t1| {
                integrate(
                    |t2| {
                        dens(t1, t2) * (lam - t1) * (lam - t2)
                            / ((mu - t1) * (mu - t2))
                    },
                    -7.0,
                    7.0,
                    1e-11,
                    1e-11,
                )
            },
            -7.0,
            7.0,
            1e-11,
            1e-11,
        );
        let oracle = num / z;
        let got = goe_ratio_quadrature(lam, mu, 2).unwrap();
        assert!((got - oracle).norm() < 1e-6, "{got} vs {oracle}");
    }

    #[test]
    fn goe_n2_im_matches_closed_form() {
        for &(lam, mu) in &[(0.3, 0.7), (-0.4, 0.1), (0.0, 0.9)] {
            let quad_im = goe_ratio_quadrature(lam, Complex64::new(mu, 1e-6), 2)
                .unwrap()
                .im;
            let closed = goe_im_f2(lam, mu);
            assert!(
                (quad_im - closed).abs() < 1e-5 * (1.0 + closed.abs()),
                "lam={lam} mu={mu}: {quad_im} vs {closed}"
            );
        }
    }

    #[test]
    fn goe_n4_im_matches_closed_form() {
        for &(lam, mu) in &[(0.2, 0.5), (-0.3, 0.4)] {
            let quad_im = goe_ratio_quadrature(lam, Complex64::new(mu, 1e-6), 4)
                .unwrap()
                .im;
            let closed = goe_im_f4(lam, mu);
            assert!(
                (quad_im - closed).abs() < 1e-4 * (1.0 + closed.abs()),
                "lam={lam} mu={mu}: {quad_im} vs {closed}"
            );
        }
    }

    #[test]
    fn goe_im_f2_matches_s2_identity() {
        // Im F_2 = pi (mu_bar - lambda_bar) S_2(lambda_bar, mu_bar)
        //          e^{-mu_bar^2/2 + lambda_bar^2/2} / sqrt(pi)
        // (the S_2 identity in scaled variables, carried to our
        // normalization)
        let (lam, mu) = (0.3, 0.7);
        let lb = lam * std::f64::consts::SQRT_2;
        let mb = mu * std::f64::consts::SQRT_2;
        let s2 = goe_kernel_sn(lb, mb, 2).unwrap();
        let identity = std::f64::consts::PI
            * (mb - lb)
            * s2
            * (-mb * mb / 2.0 + lb * lb / 2.0).exp();
        let closed = goe_im_f2(lam, mu);
        assert!(
            (identity - closed).abs() < 1e-10,
            "{identity} vs {closed}"
        );
    }

    #[test]
    fn goe_im_eps_dependence_is_linear() {
        // both terms finite, boundary approach O(eps)
        let (lam, mu) = (0.2, 0.6);
        let f0 = goe_im_f2(lam, mu);
        let e4 = goe_ratio_quadrature(lam, Complex64::new(mu, 1e-4), 2)
            .unwrap()
            .im
            - f0;
        let e5 = goe_ratio_quadrature(lam, Complex64::new(mu, 1e-5), 2)
            .unwrap()
            .im
            - f0;
        assert!(e4.abs() < 1e-2);
        assert!(e5.abs() < 0.2 * e4.abs() + 1e-9, "e4={e4} e5={e5}");
    }

    // ---------- S_N kernel ----------

    #[test]
    fn sn_first_sum_symmetric() {
        let sum_only = |x: f64, y: f64| -> f64 {
            (0..4).map(|i| hermite_phi(i, x) * hermite_phi(i, y)).sum()
        };
        assert!((sum_only(0.4, 0.9) - sum_only(0.9, 0.4)).abs() < 1e-15);
    }

    #[test]
    fn sn_two_representations_agree() {
        // second form: sum over even i of phi_2i(x) phi_2i(y)
        //   - phi'_2i(x) int_0^y phi_2i
        let n = 4u32;
        for &(x, y) in &[(0.4, 0.9), (-0.6, 0.3), (0.0, 1.5)] {
            let line1 = goe_kernel_sn(x, y, n).unwrap();
            let mut line2 = 0.0;
            for i in (0..n).step_by(2) {
                line2 += hermite_phi(i, x) * hermite_phi(i, y);
                line2 -= crate::specfun::hermite_phi_prime(i, x)
                    * hermite_phi_integral(i, y);
            }
            assert!(
                (line1 - line2).abs() < 1e-12,
                "x={x} y={y}: {line1} vs {line2}"
            );
        }
    }

    #[test]
    fn s4_diagonal_closed_form() {
        // S_4(x, x) = [ (x^3 - 3x/2) B(x) + (3x^2 + 3/2) e^{-x^2} ] / sqrt(pi)
        // (the ratio-formula diagonal identity, normalized)
        for &x in &[0.5, 1.0, 1.8] {
            let s4 = goe_kernel_sn(x, x, 4).unwrap();
            let closed = ((x.powi(3) - 1.5 * x) * incomplete_gaussian_b(x)
                + (3.0 * x * x + 1.5) * (-x * x).exp())
                / SQRT_PI;
            assert!((s4 - closed).abs() < 1e-10, "x={x}: {s4} vs {closed}");
        }
    }

    #[test]
    fn s4_diagonal_matches_ratio_derivative() {
        // d/dlambda Im F_4(lambda, mu)|_{mu=lambda} = -pi sqrt(N)
        //   S_N(lambda_bar, lambda_bar)
        let mu = 0.5;
        let d = 1e-4;
        let deriv = (goe_im_f4(mu + d, mu) - goe_im_f4(mu - d, mu)) / (2.0 * d);
        let s4 = goe_kernel_sn(2.0 * mu, 2.0 * mu, 4).unwrap();
        let want = -std::f64::consts::PI * 2.0 * s4;
        assert!((deriv - want).abs() < 1e-5, "{deriv} vs {want}");
    }

    #[test]
    fn goe_density_matches_mc_at_n4() {
        // Monte Carlo oracle for the calibrated density normalization
        let spec = EnsembleSpec::new(1, 4, 1.0, None).unwrap();
        let n_samp = 30_000;
        let lam = 0.4;
        let half_bin = 0.1;
        let mut count = 0usize;
        for i in 0..n_samp as u64 {
            let s = sample_spectrum(&spec, task_seed(99, i));
            count += s
                .eigenvalues
                .iter()
                .filter(|&&x| (x - lam).abs() < half_bin)
                .count();
        }
        let mc = count as f64 / (n_samp as f64 * 4.0 * 2.0 * half_bin);
        let exact = goe_density(lam, 4).unwrap();
        let mc_sigma = (count as f64).sqrt() / (n_samp as f64 * 4.0 * 2.0 * half_bin);
        assert!(
            (mc - exact).abs() < 3.0 * mc_sigma + 0.003,
            "mc {mc} vs exact {exact} (sigma {mc_sigma})"
        );
    }

    // ---------- GSE moments ----------

    #[test]
    fn gse_inverse_moment_large_mu() {
        // the first correction to mu^{-2N} is O(<b^2>/mu^2); at mu = 100 it
        // sits well below the 1e-3 tolerance
        let mu = Complex64::new(100.0, 1.0);
        let v = gse_inverse_moment(mu, 2).unwrap();
        let leading = mu.powi(-4);
        assert!((v - leading).norm() < 1e-3 * leading.norm(), "{v} vs {leading}");
    }

    #[test]
    fn gse_inverse_moment_im_closed_form() {
        for &mu in &[0.2, 0.6, -0.4] {
            let quad_im = gse_inverse_moment(Complex64::new(mu, 1e-6), 2).unwrap().im;
            let closed = gse_inverse_moment_im(mu, 2);
            assert!(
                (quad_im - closed).abs() < 1e-4 * (1.0 + closed.abs()),
                "mu={mu}: {quad_im} vs {closed}"
            );
        }
    }

    #[test]
    fn gse_inverse_moment_matches_mc() {
        // doubled-representation sampling with weight exp(-N Tr X^2)
        let spec = EnsembleSpec::new(4, 2, 2.0, None).unwrap();
        let mu = Complex64::new(0.3, 0.2);
        let n_samp = 40_000;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut vals = Vec::with_capacity(n_samp);
        for i in 0..n_samp as u64 {
            let s = sample_spectrum(&spec, task_seed(123, i));
            let v: Complex64 = s
                .eigenvalues
                .iter()
                .map(|&x| -(mu - x).ln())
                .sum::<Complex64>()
                .exp();
            sum += v;
            vals.push(v);
        }
        let mean = sum / n_samp as f64;
        let var: f64 = vals
            .iter()
            .map(|v| (v - mean).norm_sqr())
            .sum::<f64>()
            / (n_samp as f64 - 1.0);
        let se = (var / n_samp as f64).sqrt();
        let exact = gse_inverse_moment(mu, 2).unwrap();
        assert!(
            (mean - exact).norm() < 3.0 * se,
            "mc {mean} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn gse_det2_n1_gaussian_moment() {
        // N = 1: <(lambda - x)^2> with var(x) = 1/(2 N) = 1/2
        for &lam in &[0.0, 0.7] {
            let got = gse_det2_moment(lam, 1).unwrap();
            let want = lam * lam + 0.5;
            assert!((got - want).abs() < 1e-10, "lam={lam}: {got} vs {want}");
        }
    }

    #[test]
    fn gse_det2_is_monic_degree_2n() {
        // p(lambda)/lambda^{2N} -> 1 for large lambda
        let lam = 60.0;
        let v = gse_det2_moment(lam, 2).unwrap();
        assert!((v / lam.powi(4) - 1.0).abs() < 1e-3);
        // and a degree-4 polynomial is determined by 5 points: check the
        // 6th-order finite difference vanishes
        let h = 0.5;
        let p: Vec<f64> = (0..7)
            .map(|k| gse_det2_moment((k as f64 - 3.0) * h, 2).unwrap())
            .collect();
        let d6 = p[0] - 6.0 * p[1] + 15.0 * p[2] - 20.0 * p[3] + 15.0 * p[4] - 6.0 * p[5]
            + p[6];
        assert!(d6.abs() < 1e-8, "d6 = {d6}");
    }

    #[test]
    fn gse_det2_matches_mc() {
        let spec = EnsembleSpec::new(4, 2, 2.0, None).unwrap();
        let lam = 0.4;
        let n_samp = 40_000;
        let mut vals = Vec::with_capacity(n_samp);
        for i in 0..n_samp as u64 {
            let s = sample_spectrum(&spec, task_seed(321, i));
            // det(lambda - X)^2 = product over all doubled eigenvalues
            let v: f64 = s.eigenvalues.iter().map(|&x| lam - x).product();
            vals.push(v);
        }
        let mean: f64 = vals.iter().sum::<f64>() / n_samp as f64;
        let var: f64 = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
            / (n_samp as f64 - 1.0);
        let se = (var / n_samp as f64).sqrt();
        let exact = gse_det2_moment(lam, 2).unwrap();
        assert!(
            (mean - exact).abs() < 3.0 * se,
            "mc {mean} vs exact {exact} (se {se})"
        );
    }
}
