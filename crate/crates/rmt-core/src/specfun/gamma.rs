//! Log-gamma and error function (standard scalar implementations).

/// Lanczos approximation of `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    // g = 7, n = 9 Lanczos coefficients
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    assert!(x > 0.0, "ln_gamma requires positive argument");
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + 7.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Error function, series for small `|x|` and continued-fraction erfc beyond.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x < 3.0 {
        // Maclaurin series of erf
        let two_over_sqrt_pi = 2.0 / std::f64::consts::PI.sqrt();
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 0usize;
        loop {
            n += 1;
            term *= -x2 / n as f64;
            let contrib = term / (2.0 * n as f64 + 1.0);
            sum += contrib;
            if contrib.abs() < 1e-18 * sum.abs().max(1e-300) || n > 200 {
                break;
            }
        }
        two_over_sqrt_pi * sum
    } else {
        1.0 - erfc_cf(x)
    }
}

/// Complementary error function by Lentz continued fraction, `x >= 3`.
fn erfc_cf(x: f64) -> f64 {
    // erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let mut tail = 0.0;
    for k in (1..=60).rev() {
        tail = 0.5 * k as f64 / (x + tail);
    }
    (-x * x).exp() / std::f64::consts::PI.sqrt() / (x + tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_integers() {
        // Gamma(n) = (n-1)!
        let mut fact = 1.0f64;
        for n in 1..=15 {
            assert!((ln_gamma(n as f64) - fact.ln()).abs() < 1e-11, "n={n}");
            fact *= n as f64;
        }
    }

    #[test]
    fn ln_gamma_half() {
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
    }

    #[test]
    fn erf_reference_values() {
        // quadrature oracle for erf
        for &x in &[0.2, 1.0, 2.5, 3.5, 5.0] {
            let oracle = 2.0 / std::f64::consts::PI.sqrt()
                * crate::quad::integrate(|t: f64| (-t * t).exp(), 0.0, x, 1e-15, 1e-14);
            assert!((erf(x) - oracle).abs() < 1e-13, "x={x}: {} vs {oracle}", erf(x));
        }
    }
}
