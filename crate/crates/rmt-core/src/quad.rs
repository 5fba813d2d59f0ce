//! Quadrature rules and adaptive integration.
//!
//! All quadrature here is artifact plumbing: Gauss-Legendre panels with
//! bisection refinement, and Gauss-Hermite rules built by Golub-Welsch.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Output types an integrand may produce (real or complex).
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, f: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, f: f64) -> Self {
        self * f
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, f: f64) -> Self {
        self * f
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Nodes by Newton iteration on the three-term recurrence; accurate to
/// machine precision for the orders used here (n <= ~200).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P_n'(x) by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss-Hermite rule: nodes `x_i` and weights `w_i` for
/// `int f(x) e^{-x^2} dx ~= sum w_i f(x_i)`, built by Golub-Welsch.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = (i as f64 / 2.0).sqrt();
        jac[(i - 1, i)] = b;
        jac[(i, i - 1)] = b;
    }
    let eig = jac.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let v0 = eig.eigenvectors[(0, j)];
            (eig.eigenvalues[j], std::f64::consts::PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

struct Panel16 {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn panel16() -> &'static Panel16 {
    use std::sync::OnceLock;
    static CELL: OnceLock<Panel16> = OnceLock::new();
    CELL.get_or_init(|| {
        let (nodes, weights) = gauss_legendre(16);
        Panel16 { nodes, weights }
    })
}

fn panel_integrate<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> T {
    let p = panel16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = T::zero();
    for (x, w) in p.nodes.iter().zip(&p.weights) {
        acc = acc.add(f(mid + half * x).scale(*w));
    }
    acc.scale(half)
}

/// Adaptive Gauss-Legendre integration on `[a, b]` by panel bisection.
///
/// The error of a panel is estimated by comparing one GL-16 pass against two
/// half-length passes. Refinement stops when the estimate falls below
/// `abs_tol + rel_tol * |whole|` (shared across panels) or at depth 48.
pub fn integrate<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> T {
    let whole = panel_integrate(&mut f, a, b);
    let scale = whole.norm().max(1e-300);
    let tol = abs_tol.max(rel_tol * scale);
    adaptive_step(&mut f, a, b, whole, tol, 0)
}

fn adaptive_step<T: QuadValue>(
    f: &mut impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    whole: T,
    tol: f64,
    depth: usize,
) -> T {
    let mid = 0.5 * (a + b);
    let left = panel_integrate(f, a, mid);
    let right = panel_integrate(f, mid, b);
    let refined = left.add(right);
    let err = refined.sub(whole).norm();
    if err < tol || depth >= 48 {
        return refined;
    }
    let half_tol = 0.5 * tol;
    adaptive_step(f, a, mid, left, half_tol, depth + 1)
        .add(adaptive_step(f, mid, b, right, half_tol, depth + 1))
}

/// Integrate a function that decays like a Gaussian over the whole real
/// line, truncating at `|x| = cutoff`.
pub fn integrate_real_line<T: QuadValue>(
    f: impl FnMut(f64) -> T,
    cutoff: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> T {
    integrate(f, -cutoff, cutoff, abs_tol, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // degree 15 is exact for an 8-point rule
        let val: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((val - 2.0 / 15.0).abs() < 1e-14);
        let sum_w: f64 = w.iter().sum();
        assert!((sum_w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hermite_rule_matches_gaussian_moments() {
        let (x, w) = gauss_hermite(40);
        let m0: f64 = w.iter().sum();
        assert!((m0 - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((m2 - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        // Lorentzian of width 1e-5 centred off-origin: integral = pi (almost).
        let eps = 1e-5;
        let v = integrate(|x: f64| eps / (eps * eps + (x - 0.3) * (x - 0.3)), -10.0, 10.0, 1e-10, 1e-10);
        assert!((v - std::f64::consts::PI).abs() < 1e-5);
    }

    #[test]
    fn adaptive_complex() {
        use num_complex::Complex64;
        let v = integrate(
            |x: f64| Complex64::new(0.0, x).exp(),
            0.0,
            std::f64::consts::PI,
            1e-12,
            1e-12,
        );
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }
}
