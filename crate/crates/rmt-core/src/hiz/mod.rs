//! Exact-rational engine for the heat-kernel asymptotic series and the
//! zero-replica contour constants.
//!
//! The central object is the `1/x` series solution of
//!
//! ```text
//! g'' + (1 - (k-1)/x) g' + (gamma/x^2) g = 0,   gamma = k^2 beta (2-beta) / 4
//! ```
//!
//! Substituting `g = sum_p c_p x^{-p}` and collecting powers gives the
//! recursion (derived by hand before coding; the paper-example coefficients
//! in the tests are the gate):
//!
//! ```text
//! (p+1) c_{p+1} = [p(p+k) + gamma] c_p,   c_0 = 1.
//! ```
//!
//! All coefficient arithmetic is exact rational; floats enter only when a
//! series is finally evaluated at a numeric point.

mod multivariate;

pub use multivariate::{multivariate_residual_check, pde_apply, MultivariatePoint, Term};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::RmtError;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parameters of the scaled heat-kernel ODE.
#[derive(Debug, Clone, PartialEq)]
pub struct HizParams {
    /// Dyson index; 1, 2, 4 are the classical values but any positive
    /// rational is accepted.
    pub beta: BigRational,
    /// replica / group dimension, a positive integer
    pub k: u32,
    /// `k^2 beta (2 - beta) / 4`, kept consistent with `(beta, k)`
    gamma: BigRational,
}

impl HizParams {
    pub fn new(beta: BigRational, k: u32) -> Result<Self, RmtError> {
        if k == 0 {
            return Err(RmtError::InvalidParameter("k must be >= 1".into()));
        }
        if beta <= BigRational::zero() {
            return Err(RmtError::InvalidParameter("beta must be positive".into()));
        }
        let k2 = rat(i64::from(k) * i64::from(k), 4);
        let gamma = &k2 * &beta * (rat(2, 1) - &beta);
        Ok(Self { beta, k, gamma })
    }

    pub fn classical(beta: u32, k: u32) -> Result<Self, RmtError> {
        Self::new(rat(i64::from(beta), 1), k)
    }

    pub fn gamma(&self) -> &BigRational {
        &self.gamma
    }
}

/// A truncated `1/x` series with exact rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HizSeries {
    pub params: HizParams,
    /// `c_0 .. c_P`, with `c_0 = 1`
    pub coefficients: Vec<BigRational>,
    /// true when the recursion factor hit zero, so every later coefficient
    /// is exactly zero
    pub terminated: bool,
}

impl HizSeries {
    /// Float evaluation of the partial sum at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(p, c)| rational_to_f64(c) / x.powi(p as i32))
            .sum()
    }

    /// JSON export: `{beta, k, coefficients: [[num, den], ...], terminated}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "beta": [self.params.beta.numer().to_string(), self.params.beta.denom().to_string()],
            "k": self.params.k,
            "coefficients": self.coefficients.iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect::<Vec<_>>(),
            "terminated": self.terminated,
        })
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // fall back to a quotient of truncated parts for huge values
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Series coefficients from the recursion `(p+1) c_{p+1} = [p(p+k)+gamma] c_p`.
pub fn series_by_recursion(params: &HizParams, order: usize) -> HizSeries {
    let k = rat(i64::from(params.k), 1);
    let mut coefficients = vec![BigRational::one()];
    let mut terminated = false;
    for p in 0..order {
        let pr = rat(p as i64, 1);
        let factor = &pr * (&pr + &k) + &params.gamma;
        let next = factor * &coefficients[p] / rat(p as i64 + 1, 1);
        if next.is_zero() {
            terminated = true;
        }
        coefficients.push(next);
    }
    HizSeries {
        params: params.clone(),
        coefficients,
        terminated,
    }
}

/// Series coefficients from the closed product form
/// `c_p = prod_{j=0}^{p-1} (beta k + 2j)((2-beta) k + 2j) / (2^{2p} p!)`.
pub fn series_closed_form(params: &HizParams, order: usize) -> HizSeries {
    let k = rat(i64::from(params.k), 1);
    let a0 = &params.beta * &k; // beta k
    let b0 = (rat(2, 1) - &params.beta) * &k; // (2-beta) k
    let mut coefficients = vec![BigRational::one()];
    let mut terminated = false;
    let mut prod = BigRational::one();
    let mut factorial = BigRational::one();
    for p in 0..order {
        let two_j = rat(2 * p as i64, 1);
        prod *= (&a0 + &two_j) * (&b0 + &two_j);
        factorial *= rat(p as i64 + 1, 1);
        let four_p = BigRational::from(BigInt::from(4u8).pow(p as u32 + 1));
        let c = &prod / (four_p * &factorial);
        if c.is_zero() {
            terminated = true;
        }
        coefficients.push(c);
    }
    HizSeries {
        params: params.clone(),
        coefficients,
        terminated,
    }
}

/// Apply the ODE operator to the partial sum symbolically and evaluate at a
/// rational `x`. By the telescoping of the recursion the result must equal
/// `(P+1) c_{P+1} x^{-P-2}` exactly; the full sum is computed term by term
/// here so that identity is a genuine check, not an assumption.
pub fn ode_residual(series: &HizSeries, x: &BigRational) -> Result<BigRational, RmtError> {
    if x.is_zero() {
        return Err(RmtError::Domain("ode_residual: x must be nonzero".into()));
    }
    let k = rat(i64::from(series.params.k), 1);
    let gamma = series.params.gamma();
    let inv_x = x.recip();
    // g   = sum c_p x^{-p}
    // g'  = sum -p c_p x^{-p-1}
    // g'' = sum p(p+1) c_p x^{-p-2}
    // residual = sum_p [p(p+k) + gamma] c_p x^{-p-2} - sum_p p c_p x^{-p-1}
    let mut res = BigRational::zero();
    let mut x_pow = inv_x.clone() * &inv_x; // x^{-p-2} at p = 0
    for (p, c) in series.coefficients.iter().enumerate() {
        let pr = rat(p as i64, 1);
        res += (&pr * (&pr + &k) + gamma) * c * &x_pow;
        res -= &pr * c * &x_pow * x; // p c_p x^{-p-1}
        x_pow *= &inv_x;
    }
    Ok(res)
}

/// `lim_{k->0} c_p(k) / k^2` for `beta = 1`, by expanding the closed-form
/// product as a polynomial in `k` and reading off the `k^2` coefficient
/// (the `k^0` and `k^1` coefficients are checked to vanish).
pub fn replica_limit_coefficient(p: usize) -> Result<BigRational, RmtError> {
    if p == 0 {
        return Err(RmtError::InvalidParameter(
            "replica_limit_coefficient: p >= 1".into(),
        ));
    }
    // c_p(k) = prod_{j=0}^{p-1} (j^2 + j k + k^2/4) / p!   (beta = 1)
    let mut poly: Vec<BigRational> = vec![BigRational::one()];
    for j in 0..p {
        let factor = vec![rat((j * j) as i64, 1), rat(j as i64, 1), rat(1, 4)];
        poly = poly_mul(&poly, &factor);
    }
    let mut factorial = BigRational::one();
    for m in 2..=p {
        factorial *= rat(m as i64, 1);
    }
    if !poly[0].is_zero() || !poly[1].is_zero() {
        return Err(RmtError::NonConvergence(
            "replica limit: expected k^0 and k^1 coefficients to vanish".into(),
        ));
    }
    Ok(&poly[2] / &factorial)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Result of comparing the resummed asymptotic series against the sine
/// integral tail.
#[derive(Debug, Clone, Copy)]
pub struct TailComparison {
    pub series_value: f64,
    pub integral_value: f64,
    pub discrepancy: f64,
    /// true when the requested order exceeds the optimal truncation index
    /// (roughly `x`), past which the asymptotic series degrades
    pub beyond_optimal_truncation: bool,
}

/// Evaluate `Re[(e^{ix}/x) g(ix)]` for the `beta = 1, k = 2` series
/// (`c_p = p!`) truncated at order `P`, and compare with
/// `int_x^infty sin z / z dz`.
pub fn asymptotic_vs_sine_tail(x: f64, order: usize) -> Result<TailComparison, RmtError> {
    if x < 5.0 {
        return Err(RmtError::Domain(
            "asymptotic_vs_sine_tail: asymptotic regime needs x >= 5".into(),
        ));
    }
    use num_complex::Complex64;
    let params = HizParams::classical(1, 2)?;
    let series = series_by_recursion(&params, order);
    let ix = Complex64::new(0.0, x);
    let mut g = Complex64::new(0.0, 0.0);
    for (p, c) in series.coefficients.iter().enumerate() {
        g += rational_to_f64(c) / ix.powi(p as i32);
    }
    let series_value = (ix.exp() / x * g).re;
    let integral_value = crate::specfun::sine_tail(x);
    Ok(TailComparison {
        series_value,
        integral_value,
        discrepancy: (series_value - integral_value).abs(),
        beyond_optimal_truncation: order as f64 > x,
    })
}

/// Exact `Gamma(n/2)` as `rational * pi^{half_power/2}`; `None` at poles.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactGamma {
    pub rational: BigRational,
    /// exponent of `sqrt(pi)`: 0 for integer arguments, 1 for half-integers
    pub sqrt_pi_power: i32,
}

impl ExactGamma {
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rational)
            * std::f64::consts::PI.sqrt().powi(self.sqrt_pi_power)
    }
}

/// `Gamma(twice_arg / 2)` exactly, for integer or half-integer arguments.
/// Returns `None` when the argument is a nonpositive integer (a pole).
pub fn exact_gamma_half(twice_arg: i64) -> Option<ExactGamma> {
    if twice_arg % 2 == 0 {
        let n = twice_arg / 2;
        if n <= 0 {
            return None;
        }
        let mut r = BigRational::one();
        for m in 2..n {
            r *= rat(m, 1);
        }
        Some(ExactGamma {
            rational: r,
            sqrt_pi_power: 0,
        })
    } else {
        // Gamma(1/2 + m) for twice_arg = 2m + 1; recurse from Gamma(1/2) = sqrt(pi)
        let mut r = BigRational::one();
        let mut t = twice_arg;
        // walk down (or up) to twice_arg = 1
        while t > 1 {
            t -= 2;
            r *= rat(t, 2); // Gamma(z+1) = z Gamma(z)
        }
        while t < 1 {
            r /= rat(t, 2); // Gamma(z) = Gamma(z+1)/z
            t += 2;
        }
        Some(ExactGamma {
            rational: r,
            sqrt_pi_power: 1,
        })
    }
}

/// The zero-replica contour constant, evaluated by the paper's two closed
/// forms. With `p` even the prefactor `(-i)^p = (-1)^{p/2}` is real, so both
/// values are exact rationals.
#[derive(Debug, Clone)]
pub struct GammaKp {
    /// finite-product (factorial) expression — always defined
    pub product_form: BigRational,
    /// Gamma-function expression; `None` when a Gamma argument hits a pole
    pub gamma_form: Option<BigRational>,
    /// `Some(false)` flags a genuine disagreement between the two printed
    /// closed forms (they differ by a sign for even `k`; see tests)
    pub forms_agree: Option<bool>,
}

/// `gamma_k^(p)` for positive integer `k` and even `p >= 0`.
pub fn gamma_kp(k: u32, p: u32) -> Result<GammaKp, RmtError> {
    if k == 0 {
        return Err(RmtError::InvalidParameter("gamma_kp: k >= 1".into()));
    }
    if p % 2 != 0 {
        return Err(RmtError::InvalidParameter(
            "gamma_kp: p must be even (odd p does not contribute)".into(),
        ));
    }
    let sign = if (p / 2) % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    let prefactor = factorial_prefactor(k);

    // product form:
    // (2+p)(4+p)...((2k-2)+p) * (p-3)(p-5)...(p-(2k-1)) / (2k-1+p)!
    let mut num = BigRational::one();
    let mut m = 2i64;
    while m <= 2 * i64::from(k) - 2 {
        num *= rat(m + i64::from(p), 1);
        m += 2;
    }
    let mut m = 3i64;
    while m <= 2 * i64::from(k) - 1 {
        num *= rat(i64::from(p) - m, 1);
        m += 2;
    }
    let mut den = BigRational::one();
    for m in 2..=(2 * i64::from(k) - 1 + i64::from(p)) {
        den *= rat(m, 1);
    }
    let product_form = &sign * &prefactor * num / den;

    // Gamma form:
    // 2 G(2-p/2) G(k+p/2) G(2k-p) / [G(2k+p) G(1+p/2) G(k-p/2) G(3-p)]
    let ik = i64::from(k);
    let ip = i64::from(p);
    let args = [
        (4 - ip, true),
        (2 * ik + ip, true),
        (4 * ik - 2 * ip, true),
        (4 * ik + 2 * ip, false),
        (2 + ip, false),
        (2 * ik - ip, false),
        (6 - 2 * ip, false),
    ];
    let mut gamma_form = Some(rat(2, 1));
    for (twice, is_numerator) in args {
        match (exact_gamma_half(twice), &mut gamma_form) {
            (Some(g), Some(acc)) => {
                debug_assert_eq!(g.sqrt_pi_power, 0, "even p keeps arguments integral");
                if is_numerator {
                    *acc *= &g.rational;
                } else {
                    *acc /= &g.rational;
                }
            }
            _ => {
                gamma_form = None;
                break;
            }
        }
    }
    let gamma_form = gamma_form.map(|g| &sign * &prefactor * g);
    let forms_agree = gamma_form.as_ref().map(|g| *g == product_form);
    Ok(GammaKp {
        product_form,
        gamma_form,
        forms_agree,
    })
}

/// `prod_{l=0}^{k-1} l! / (k+l)!` exactly.
pub fn factorial_prefactor(k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for l in 0..i64::from(k) {
        let mut f = BigRational::one();
        // l! / (k+l)! = 1 / ((l+1)(l+2)...(k+l))
        for m in (l + 1)..=(i64::from(k) + l) {
            f *= rat(m, 1);
        }
        acc /= f;
    }
    acc
}

/// The paper's zero-replica limit `lim_{k->0} gamma_k^(p)`
/// `= -(-i)^p / ((1-p) Gamma(p+1))`, real for even `p`.
pub fn gamma_kp_zero_replica_limit(p: u32) -> Result<BigRational, RmtError> {
    if p % 2 != 0 {
        return Err(RmtError::InvalidParameter("p must be even".into()));
    }
    if p == 1 {
        return Err(RmtError::Pole("p = 1 pole".into()));
    }
    let sign = if (p / 2) % 2 == 0 { -1 } else { 1 };
    let mut den = rat(1 - i64::from(p), 1);
    for m in 2..=i64::from(p) {
        den *= rat(m, 1);
    }
    Ok(rat(sign, 1) / den)
}

/// `ln G(1+z)` for the Barnes G function, `|z| < 1`, via the Taylor series
/// `(ln 2pi - 1) z/2 - (1+euler) z^2/2 + sum_{n>=3} (-1)^{n-1} zeta(n-1) z^n / n`.
/// Used to continue `prod l!/(k+l)! = G(k+1)^2 / G(2k+1)` to real `k`.
pub fn ln_barnes_g1p(z: f64) -> Result<f64, RmtError> {
    if z.abs() >= 1.0 {
        return Err(RmtError::Domain("ln_barnes_g1p: |z| < 1 required".into()));
    }
    const EULER: f64 = 0.577_215_664_901_532_9;
    let mut s = ((2.0 * std::f64::consts::PI).ln() - 1.0) * z / 2.0
        - (1.0 + EULER) * z * z / 2.0;
    let mut zp = z * z;
    for n in 3..200 {
        zp *= z;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * riemann_zeta(n - 1) * zp / n as f64;
        s += term;
        if term.abs() < 1e-17 * s.abs().max(1e-6) {
            break;
        }
    }
    Ok(s)
}

/// `zeta(n)` for integer `n >= 2` by direct summation with an integral tail
/// correction (Euler–Maclaurin to first order).
fn riemann_zeta(n: usize) -> f64 {
    let nf = n as f64;
    let m = 40usize;
    let head: f64 = (1..=m).map(|j| (j as f64).powf(-nf)).sum();
    let mf = m as f64 + 1.0;
    // int_{m+1}^inf t^-n dt + 0.5 (m+1)^-n - (n/12)(m+1)^{-n-1}
    head + mf.powf(1.0 - nf) / (nf - 1.0) + 0.5 * mf.powf(-nf)
        - nf / 12.0 * mf.powf(-nf - 1.0)
}

/// Continuation of `prod_{l<k} l!/(k+l)!` to real `k in (-1/2, 1/2)` through
/// Barnes G: the product equals `G(k+1)^2 / G(2k+1)` at positive integers.
pub fn factorial_prefactor_continued(k: f64) -> Result<f64, RmtError> {
    Ok((2.0 * ln_barnes_g1p(k)? - ln_barnes_g1p(2.0 * k)?).exp())
}
