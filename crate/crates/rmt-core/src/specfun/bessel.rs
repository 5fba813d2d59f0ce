//! Bessel functions: half-integer orders in exact sin/cos form, general real
//! order numerically, and the truncated asymptotic series of I0.

use crate::RmtError;

/// A function of the form `p(1/x) sin x + q(1/x) cos x` with polynomial
/// coefficients, as produced by the half-integer Bessel recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct SinCosForm {
    /// coefficients of `p`, `p(u) = sin_poly[0] + sin_poly[1] u + ...`
    pub sin_poly: Vec<f64>,
    /// coefficients of `q`
    pub cos_poly: Vec<f64>,
    /// overall prefactor exponent: the value is `x^{power} * (p sin + q cos)`
    pub power: f64,
}

impl SinCosForm {
    pub fn eval(&self, x: f64) -> f64 {
        let u = 1.0 / x;
        let p = horner(&self.sin_poly, u);
        let q = horner(&self.cos_poly, u);
        x.powf(self.power) * (p * x.sin() + q * x.cos())
    }
}

fn horner(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * u + ck)
}

/// `J_{n+1/2}(x)` in closed sin/cos form via the spherical Bessel recurrence
/// `j_{n+1} = ((2n+1)/x) j_n - j_{n-1}`, with `J_{n+1/2} = sqrt(2x/pi) j_n`.
///
/// Supported for `0 <= n <= 8`; the polynomial degrees grow with `n` and the
/// forward recurrence loses accuracy for small `x` beyond that.
pub fn bessel_j_half(n: u32) -> Result<SinCosForm, RmtError> {
    if n > 8 {
        return Err(RmtError::InvalidParameter(format!(
            "bessel_j_half: order {n}+1/2 not supported (n <= 8)"
        )));
    }
    // spherical j_n as (s(u) sin + c(u) cos) with u = 1/x:
    // j_0 = u sin x, j_1 = u^2 sin x - u cos x
    let mut jm = (vec![0.0, 1.0], vec![0.0]); // j_0
    let mut jc = (vec![0.0, 0.0, 1.0], vec![0.0, -1.0]); // j_1
    if n == 0 {
        jc = jm.clone();
    } else {
        for k in 1..n {
            // j_{k+1} = (2k+1) u j_k - j_{k-1}
            let f = (2 * k + 1) as f64;
            let next = (
                poly_sub(&poly_shift_scale(&jc.0, f), &jm.0),
                poly_sub(&poly_shift_scale(&jc.1, f), &jm.1),
            );
            jm = jc;
            jc = next;
        }
    }
    // J_{n+1/2}(x) = sqrt(2/pi) x^{1/2} j_n(x)
    let pref = (2.0 / std::f64::consts::PI).sqrt();
    Ok(SinCosForm {
        sin_poly: jc.0.iter().map(|c| c * pref).collect(),
        cos_poly: jc.1.iter().map(|c| c * pref).collect(),
        power: 0.5,
    })
}

fn poly_shift_scale(c: &[f64], f: f64) -> Vec<f64> {
    // f * u * p(u)
    let mut out = vec![0.0];
    out.extend(c.iter().map(|ck| f * ck));
    out
}

fn poly_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
        .collect()
}

/// `J_nu(x)` for real `nu >= 0`, `x >= 0`: ascending series for moderate `x`,
/// Hankel asymptotic expansion for large `x`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64, RmtError> {
    if !(nu >= 0.0) || !(x >= 0.0) {
        return Err(RmtError::Domain(format!(
            "bessel_j requires nu >= 0, x >= 0 (got nu={nu}, x={x})"
        )));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x < nu.max(14.0) {
        Ok(j_series(nu, x))
    } else {
        Ok(j_hankel(nu, x))
    }
}

fn j_series(nu: f64, x: f64) -> f64 {
    // (x/2)^nu / Gamma(nu+1) * sum_k (-(x/2)^2)^k / (k! (nu+1)_k)
    let h = x / 2.0;
    let mut term = (nu * h.ln() - super::ln_gamma(nu + 1.0)).exp();
    let mut sum = term;
    let h2 = h * h;
    for k in 1..200 {
        let kf = k as f64;
        term *= -h2 / (kf * (nu + kf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-8) {
            break;
        }
    }
    sum
}

fn j_hankel(nu: f64, x: f64) -> f64 {
    // J_nu(x) ~ sqrt(2/(pi x)) [ P cos(omega) - Q sin(omega) ],
    // omega = x - nu pi/2 - pi/4.
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut best = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if term.abs() > best {
            break;
        }
        best = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let omega = x - nu * std::f64::consts::FRAC_PI_2 - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// `p`-th coefficient of the asymptotic expansion
/// `I_0(x) ~ e^x / sqrt(2 pi x) * sum_p a_p / x^p`, where
/// `a_p = prod_{j=1}^{p} (2j-1)^2 / (8^p p!)`.
pub fn i0_asymptotic_coefficient(p: usize) -> f64 {
    let mut a = 1.0;
    for j in 1..=p {
        let odd = (2 * j - 1) as f64;
        a *= odd * odd / (8.0 * j as f64);
    }
    a
}

/// Asymptotic partial sum for `I_0(x)` truncated after `terms` coefficients
/// (`terms = 1` keeps only the leading `e^x/sqrt(2 pi x)`).
pub fn bessel_i0_partial(x: f64, terms: usize) -> Result<f64, RmtError> {
    if x <= 0.0 {
        return Err(RmtError::Domain(format!(
            "bessel_i0_partial requires x > 0 (got {x})"
        )));
    }
    let mut s = 0.0;
    for p in 0..terms {
        s += i0_asymptotic_coefficient(p) / x.powi(p as i32);
    }
    Ok(x.exp() / (2.0 * std::f64::consts::PI * x).sqrt() * s)
}
