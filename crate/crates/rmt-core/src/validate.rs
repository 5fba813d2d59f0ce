//! The acceptance suite: one checkable criterion per target property,
//! shared by the `rmt validate` subcommand and the `acceptance` test target.
//!
//! Each criterion runs independently, never panics on numeric failure, and
//! reports a single pass/fail line with the measured quantities, so a failed
//! gate shows *what* was measured, not just that it differed.

use crate::ensembles::{mc_ratio, mc_two_point, sample_spectra, EnsembleSpec};
use crate::error::RmtError;
use crate::hiz::{
    asymptotic_vs_sine_tail, multivariate_residual_check, replica_limit_coefficient,
    series_by_recursion, series_closed_form, HizParams, MultivariatePoint,
};
use crate::kernels::{airy_kernel, airy_edge_f, f2_general_beta, rho2_goe, rho2_gue};
use crate::source::{gap_scan, mc_validate, pastur_density, SourceProfile};
use crate::spacing::{fredholm_e_gue, tw_integrate, KernelConvention, TwTrajectory};
use crate::specfun::airy_ai;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use num_complex::Complex64;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionReport {
    /// The one-line pass/fail form printed by the gate.
    pub fn line(&self) -> String {
        format!(
            "criterion {:2} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Number of acceptance criteria.
pub const N_CRITERIA: u32 = 14;

/// Accumulator for the sub-checks of one criterion.
struct Checks {
    ok: bool,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, note: String) {
        if !ok {
            self.ok = false;
            self.notes.push(format!("FAILED: {note}"));
        } else {
            self.notes.push(note);
        }
    }

    fn into_report(self, id: u32, name: &'static str) -> CriterionReport {
        CriterionReport {
            id,
            name,
            passed: self.ok,
            detail: self.notes.join("; "),
        }
    }
}

fn error_report(id: u32, name: &'static str, err: RmtError) -> CriterionReport {
    CriterionReport {
        id,
        name,
        passed: false,
        detail: format!("errored: {err}"),
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(p: usize) -> BigRational {
    let mut f = BigRational::one();
    for m in 2..=p {
        f *= rat(m as i64, 1);
    }
    f
}

/// Run one criterion by id (1-based).
pub fn run_criterion(id: u32) -> CriterionReport {
    match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(),
        13 => criterion_13(),
        14 => criterion_14(),
        _ => CriterionReport {
            id,
            name: "unknown",
            passed: false,
            detail: format!("no criterion {id}; valid ids are 1..={N_CRITERIA}"),
        },
    }
}

/// Run the full suite.
pub fn run_all() -> Vec<CriterionReport> {
    (1..=N_CRITERIA).map(run_criterion).collect()
}

/// 1. Exact coefficient gate for the heat-kernel series.
fn criterion_1() -> CriterionReport {
    const NAME: &str = "series coefficient gate";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let s11 = series_by_recursion(&HizParams::classical(1, 1)?, 4);
        c.require(
            s11.coefficients[1] == rat(1, 4) && s11.coefficients[2] == rat(9, 32),
            "beta=1,k=1: c1 = 1/4, c2 = 9/32 exactly".into(),
        );
        let s12 = series_by_recursion(&HizParams::classical(1, 2)?, 12);
        let all_factorial = (0..=12).all(|p| s12.coefficients[p] == factorial(p));
        c.require(all_factorial, "beta=1,k=2: c_p = p! for p <= 12".into());
        let s2 = series_by_recursion(&HizParams::classical(2, 3)?, 8);
        c.require(
            (1..=8).all(|p| s2.coefficients[p] == rat(0, 1)),
            "beta=2: c_p = 0 for p >= 1".into(),
        );
        let s41 = series_by_recursion(&HizParams::classical(4, 1)?, 6);
        c.require(
            s41.terminated && (2..=6).all(|p| s41.coefficients[p] == rat(0, 1)),
            "beta=4,k=1: terminates after p = 1".into(),
        );
        let s42 = series_by_recursion(&HizParams::classical(4, 2)?, 6);
        c.require(
            s42.terminated && (3..=6).all(|p| s42.coefficients[p] == rat(0, 1)),
            "beta=4,k=2: terminates after p = 2".into(),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(1, NAME),
        Err(e) => error_report(1, NAME, e),
    }
}

/// 2. Closed form == recursion, exactly.
fn criterion_2() -> CriterionReport {
    const NAME: &str = "closed-form/recursion equivalence";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let mut pairs = 0usize;
        for beta in [1u32, 2, 4] {
            for k in 1..=6u32 {
                let params = HizParams::classical(beta, k)?;
                let rec = series_by_recursion(&params, 20);
                let closed = series_closed_form(&params, 20);
                if rec.coefficients != closed.coefficients {
                    c.require(false, format!("mismatch at beta={beta}, k={k}"));
                }
                pairs += 1;
            }
        }
        c.require(
            pairs == 18,
            format!("{pairs} (beta, k) pairs agree exactly through p = 20"),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(2, NAME),
        Err(e) => error_report(2, NAME, e),
    }
}

/// 3. Zero-replica limit of the beta = 1 coefficients.
fn criterion_3() -> CriterionReport {
    const NAME: &str = "replica limit";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        for p in 1..=12usize {
            let got = replica_limit_coefficient(p)?;
            let want = factorial(p - 1) / rat(4 * p as i64, 1);
            if got != want {
                c.require(false, format!("p = {p}: got {got}, want (p-1)!/(4p)"));
            }
        }
        c.require(true, "lim c_p/k^2 = (p-1)!/(4p) exactly for p <= 12".into());
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(3, NAME),
        Err(e) => error_report(3, NAME, e),
    }
}

/// 4. Bessel-series consistency of the beta=1, k=1 coefficients.
fn criterion_4() -> CriterionReport {
    const NAME: &str = "Bessel consistency";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        // After the argument map x -> x/2 the series coefficients become
        // c_p / 2^p; the first three must equal 1/8, 9/128, 225/3072 exactly.
        let series = series_by_recursion(&HizParams::classical(1, 1)?, 3);
        let want = [rat(1, 8), rat(9, 128), rat(225, 3072)];
        for (p, w) in want.iter().enumerate() {
            let p = p + 1;
            let got = &series.coefficients[p] / rat(1 << p, 1);
            if got != *w {
                c.require(false, format!("p = {p}: got {got}"));
            }
        }
        c.require(
            true,
            "c_p / 2^p = 1/8, 9/128, 225/3072 exactly for p = 1..3".into(),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(4, NAME),
        Err(e) => error_report(4, NAME, e),
    }
}

/// 5. Finite-N oracle chain: exact formulas vs Monte Carlo and quadrature.
fn criterion_5() -> CriterionReport {
    const NAME: &str = "finite-N oracle chain";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let lambda = 0.3;
        let mu = Complex64::new(0.1, 0.1);
        for (n, seed) in [(2u32, 0x51_02u64), (4, 0x51_04)] {
            let exact = crate::exactfn::gue_ratio(lambda, mu, n)?;
            let spec = EnsembleSpec::new(2, n as usize, 1.0, None)?;
            let est = mc_ratio(&spec, lambda, mu, 100_000, seed)?;
            let dev = (est.mean - exact).norm();
            c.require(
                dev <= 3.0 * est.std_error,
                format!(
                    "GUE N={n}: |MC - exact| = {dev:.2e} <= 3 se = {:.2e}",
                    3.0 * est.std_error
                ),
            );
        }
        let lam = 0.4;
        let mu_r = 0.2;
        let quad = crate::exactfn::goe_ratio_quadrature(lam, Complex64::new(mu_r, 1e-6), 2)?;
        let closed = crate::exactfn::goe_im_f2(lam, mu_r);
        let dev = (quad.im - closed).abs();
        c.require(
            dev < 1e-5,
            format!("GOE N=2: |Im quadrature - closed form| = {dev:.2e} < 1e-5"),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(5, NAME),
        Err(e) => error_report(5, NAME, e),
    }
}

/// 6. Semicircle law at desk scale (beta = 1).
fn criterion_6() -> CriterionReport {
    const NAME: &str = "semicircle sup-norm";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let spec = EnsembleSpec::new(1, 200, 1.0, None)?;
        let samples = sample_spectra(&spec, 200, 0x5EA1);
        let hist = crate::ensembles::empirical_density(&samples, 30, (-1.2, 1.2))?;
        let sup = hist
            .centers
            .iter()
            .zip(&hist.densities)
            .map(|(&x, &d)| (d - (2.0 - x * x).sqrt() / std::f64::consts::PI).abs())
            .fold(0.0, f64::max);
        c.require(
            sup < 0.02,
            format!("N=200, 200 samples: sup |hist - semicircle| = {sup:.4} < 0.02"),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(6, NAME),
        Err(e) => error_report(6, NAME, e),
    }
}

/// 7. Quaternion-ensemble density at the origin.
fn criterion_7() -> CriterionReport {
    const NAME: &str = "GSE central density";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let spec = EnsembleSpec::new(4, 100, 2.0, None)?;
        let samples = sample_spectra(&spec, 200, 0x65E);
        let hist = crate::ensembles::empirical_density(&samples, 11, (-0.55, 0.55))?;
        let rho0 = hist.densities[5];
        let dev = (rho0 - 1.0 / std::f64::consts::PI).abs();
        c.require(
            dev < 0.02,
            format!("N=100, 200 samples: |rho(0) - 1/pi| = {dev:.4} < 0.02"),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(7, NAME),
        Err(e) => error_report(7, NAME, e),
    }
}

/// 8. Bulk two-point universality (finite-N, stated tolerances).
fn criterion_8() -> CriterionReport {
    const NAME: &str = "bulk two-point universality";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let sup_vs = |h: &crate::ensembles::TwoPointHistogram, f: &dyn Fn(f64) -> f64| {
            h.x.iter()
                .zip(&h.ratio)
                .filter(|(&x, _)| (0.5..=6.0).contains(&x))
                .map(|(&x, &r)| (r - f(x)).abs())
                .fold(0.0, f64::max)
        };
        let spec2 = EnsembleSpec::new(2, 200, 1.0, None)?;
        let h2 = mc_two_point(&spec2, 0.0, 0.1, 24, 6.0, 1200, 0x8_02)?;
        let sup2 = sup_vs(&h2, &rho2_gue);
        c.require(
            sup2 < 0.05 && !h2.insufficient_statistics,
            format!("beta=2 N=200 vs 1 - sinc^2: sup = {sup2:.4} < 0.05"),
        );
        let spec1 = EnsembleSpec::new(1, 200, 1.0, None)?;
        let h1 = mc_two_point(&spec1, 0.0, 0.1, 24, 6.0, 1500, 0x8_01)?;
        let sup1 = sup_vs(&h1, &rho2_goe);
        c.require(
            sup1 < 0.07 && !h1.insufficient_statistics,
            format!("beta=1 N=200 vs orthogonal kernel: sup = {sup1:.4} < 0.07"),
        );
        let sourced = EnsembleSpec::new(1, 200, 1.0, Some(SourceProfile::two_atom(0.3)))?;
        let h1s = mc_two_point(&sourced, 0.0, 0.1, 24, 6.0, 1500, 0x8_31)?;
        let change = h1
            .x
            .iter()
            .zip(h1.ratio.iter().zip(&h1s.ratio))
            .filter(|(&x, _)| (0.5..=6.0).contains(&x))
            .map(|(_, (&a, &b))| (a - b).abs())
            .fold(0.0, f64::max);
        c.require(
            change < 0.05,
            format!("two-atom source a=0.3 moves the curve by {change:.4} < 0.05"),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(8, NAME),
        Err(e) => error_report(8, NAME, e),
    }
}

/// Least-squares cubic coefficient of `E(s) - 1 + s` over `s` in `[0.05, 0.2]`.
fn goe_cubic_fit(convention: KernelConvention) -> Result<f64, RmtError> {
    let traj = TwTrajectory::integrate(0.5, 1e-4, 1e-3, convention)?;
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..=30 {
        let s = 0.05 + 0.005 * i as f64;
        let y = traj.e_goe(s)? - 1.0 + s;
        let (x1, x2) = (s.powi(3), s.powi(4));
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        r1 += x1 * y;
        r2 += x2 * y;
    }
    Ok((s22 * r1 - s12 * r2) / (s11 * s22 - s12 * s12))
}

/// 9. Level spacing: both routes, both conventions.
fn criterion_9() -> CriterionReport {
    const NAME: &str = "level spacing";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let e01 = fredholm_e_gue(0.1, 40)?;
        c.require(
            (e01 - 0.9).abs() < 5e-4,
            format!("Nystrom |E(0.1) - 0.9| = {:.2e} < 5e-4", (e01 - 0.9).abs()),
        );
        let traj = tw_integrate(2.5, 1e-4)?;
        let mut worst = 0.0f64;
        for &s in &[0.1, 0.5, 1.0, 1.5, 2.0, 2.5] {
            worst = worst.max((traj.e_gue(s)? - fredholm_e_gue(s, 60)?).abs());
        }
        c.require(
            worst < 1e-6,
            format!("ODE vs Nystrom on [0.1, 2.5]: max dev = {worst:.2e} < 1e-6"),
        );
        let c_unit = goe_cubic_fit(KernelConvention::UnitDensity)?;
        let want_unit = std::f64::consts::PI.powi(2) / 36.0;
        c.require(
            (c_unit - want_unit).abs() / want_unit < 0.02,
            format!("GOE cubic (unit density) = {c_unit:.5} vs pi^2/36 within 2%"),
        );
        let c_pl = goe_cubic_fit(KernelConvention::PiLess)?;
        c.require(
            (c_pl - 1.0 / 36.0).abs() * 36.0 < 0.02,
            format!("GOE cubic (pi-less) = {c_pl:.6} vs 1/36 within 2%"),
        );
        let e4 = crate::spacing::e_gse(0.1)?;
        c.require(
            (e4 - 0.9).abs() < 1e-3,
            format!("GSE |E(0.1) - 0.9| = {:.2e} < 1e-3", (e4 - 0.9).abs()),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(9, NAME),
        Err(e) => error_report(9, NAME, e),
    }
}

/// 10. Resummed asymptotic series vs the sine-integral tail.
fn criterion_10() -> CriterionReport {
    const NAME: &str = "asymptotic series vs integral";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let cmp = asymptotic_vs_sine_tail(10.0, 8)?;
        c.require(
            cmp.discrepancy < 1e-3,
            format!(
                "x = 10, order 8: |series - tail| = {:.2e} < 1e-3",
                cmp.discrepancy
            ),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(10, NAME),
        Err(e) => error_report(10, NAME, e),
    }
}

/// 11. Airy edge identity and ODE residual.
fn criterion_11() -> CriterionReport {
    const NAME: &str = "Airy edge identity";
    let mut c = Checks::new();
    // Finite-difference oracle for the defining form
    // (1/(x1-x2))(d1 - d2) K(x1, x2) against the closed expression.
    let h = 1e-5;
    let mut worst = 0.0f64;
    for i in 0..7 {
        for j in 0..7 {
            let x1 = -3.0 + i as f64;
            let x2 = -3.0 + j as f64 + 0.5;
            let d1 = (airy_kernel(x1 + h, x2) - airy_kernel(x1 - h, x2)) / (2.0 * h);
            let d2 = (airy_kernel(x1, x2 + h) - airy_kernel(x1, x2 - h)) / (2.0 * h);
            worst = worst.max((airy_edge_f(x1, x2) - (d1 - d2) / (x1 - x2)).abs());
        }
    }
    c.require(
        worst < 1e-8,
        format!("7x7 grid on [-3,3]^2: max |closed - derivative form| = {worst:.2e} < 1e-8"),
    );
    let mut residual: f64 = 0.0;
    for &x in &[-2.0, 0.0, 1.0, 3.5] {
        let a = airy_ai(x);
        residual = residual.max((a.ai_second - x * a.ai).abs());
    }
    c.require(
        residual == 0.0,
        "Ai'' = x Ai residual exactly 0 (by construction)".into(),
    );
    c.into_report(11, NAME)
}

/// 12. Self-consistent density with a source.
fn criterion_12() -> CriterionReport {
    const NAME: &str = "self-consistent density";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let rho0 = pastur_density(&SourceProfile::zero(), &[0.0], 1e-8)?[0];
        let dev = (rho0 - 1.0 / std::f64::consts::PI).abs();
        c.require(dev < 1e-6, format!("zero source |rho(0) - 1/pi| = {dev:.2e}"));
        let profile = SourceProfile::two_atom(0.5);
        for (beta, n_samples, seed) in [(1u8, 150usize, 0xC_01u64), (2, 100, 0xC_02)] {
            let sup = mc_validate(&profile, beta, 300, n_samples, seed)?;
            c.require(
                sup < 0.04,
                format!("two-atom a=0.5, beta={beta}, N=300: MC sup-norm = {sup:.4} < 0.04"),
            );
        }
        let scan = gap_scan(&[0.6, 0.9, 1.1, 1.3])?;
        let dev = (scan.critical_a - 1.0).abs();
        c.require(
            dev < 1e-4,
            format!("gap scan critical a = {:.6} vs 1 (cubic oracle)", scan.critical_a),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(12, NAME),
        Err(e) => error_report(12, NAME, e),
    }
}

/// 13. General-beta bulk correlator anchors.
fn criterion_13() -> CriterionReport {
    const NAME: &str = "general-beta anchors";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let mut w1 = 0.0f64;
        let mut w2 = 0.0f64;
        for i in 0..200 {
            let x = 0.1 + 39.9 * i as f64 / 199.0;
            let closed1 = (x * x.cos() - x.sin()) / x.powi(3);
            w1 = w1.max((f2_general_beta(x, 1.0)? - closed1).abs());
            w2 = w2.max((f2_general_beta(x, 2.0)? - x.sin() / x).abs());
        }
        c.require(
            w1 < 1e-12,
            format!("beta=1 vs (1/x) d/dx sinc: max dev = {w1:.2e} < 1e-12"),
        );
        c.require(
            w2 < 1e-12,
            format!("beta=2 vs sinc: max dev = {w2:.2e} < 1e-12"),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(13, NAME),
        Err(e) => error_report(13, NAME, e),
    }
}

/// 14. Multivariate truncation residual when N doubles.
fn criterion_14() -> CriterionReport {
    const NAME: &str = "multivariate residual scaling";
    let mut c = Checks::new();
    let body = || -> Result<(), RmtError> {
        let pt = MultivariatePoint {
            u: [1.0, 0.7, -0.6, -1.2],
            mu: 0.8,
            mu_prime: -0.5,
        };
        let r100 = multivariate_residual_check(2, 100.0, &pt)?;
        let r200 = multivariate_residual_check(2, 200.0, &pt)?;
        let ratio = r200 / r100;
        // The order-2 coefficients cancel the O(1/N) operator output exactly
        // (pole pieces included), so the residual is O(1/N^2) and the ratio
        // is 0.25 rather than the anticipated 0.5.  The gate requires at
        // least the demanded halving and reports the measured value.
        c.require(
            ratio <= 0.6,
            format!("order-2 residual ratio N=100 -> 200: {ratio:.10} <= 0.6 (O(1/N^2): exact quartering)"),
        );
        Ok(())
    }();
    match body {
        Ok(()) => c.into_report(14, NAME),
        Err(e) => error_report(14, NAME, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_line_format() {
        let r = run_criterion(1);
        assert!(r.passed, "{}", r.line());
        assert!(r.line().starts_with("criterion  1 [PASS]"));
        let bad = run_criterion(99);
        assert!(!bad.passed);
    }

    #[test]
    fn fast_exact_criteria_pass() {
        for id in [2, 3, 4, 10, 11, 13, 14] {
            let r = run_criterion(id);
            assert!(r.passed, "{}", r.line());
        }
    }
}
