//! Residual checker for the degenerate four-variable heat-kernel PDE
//!
//! ```text
//! 2N mu (d_1 + d_2) g + 2N mu' (d_3 + d_4) g + sum_a d_a^2 g
//!   + (d_1 - d_2) g / (u_1 - u_2) + (d_3 - d_4) g / (u_3 - u_4)
//!   + (1/2) [ 1/(u_1-u_3)^2 + 1/(u_1-u_4)^2 + 1/(u_2-u_3)^2 + 1/(u_2-u_4)^2 ] g = 0
//! ```
//!
//! applied to the known `1/N` truncations of `g`. Every term of the
//! truncation is a product of powers of `u`-differences, so all first and
//! second partials are available in closed form; no numeric differentiation
//! is involved.

use crate::RmtError;

/// Evaluation point: `u_1..u_4` plus the two degenerate source values.
#[derive(Debug, Clone, Copy)]
pub struct MultivariatePoint {
    pub u: [f64; 4],
    pub mu: f64,
    pub mu_prime: f64,
}

/// One monomial `coeff * N^{-n_order} (mu-mu')^{-mu_order} * prod (u_a-u_b)^{e}`.
#[derive(Debug, Clone)]
pub struct Term {
    pub coeff: f64,
    pub n_order: i32,
    pub mu_order: i32,
    /// `(a, b, exponent)` factors `(u_a - u_b)^{exponent}`, indices 0-based
    pub factors: Vec<(usize, usize, i32)>,
}

impl Term {
    pub fn value(&self, n: f64, pt: &MultivariatePoint) -> f64 {
        let dmu = pt.mu - pt.mu_prime;
        let mut v = self.coeff * n.powi(-self.n_order) * dmu.powi(-self.mu_order);
        for &(a, b, e) in &self.factors {
            v *= (pt.u[a] - pt.u[b]).powi(e);
        }
        v
    }

    /// logarithmic derivative `d_i t / t`
    fn dlog(&self, i: usize, pt: &MultivariatePoint) -> f64 {
        self.factors
            .iter()
            .map(|&(a, b, e)| {
                let s = if i == a {
                    1.0
                } else if i == b {
                    -1.0
                } else {
                    return 0.0;
                };
                f64::from(e) * s / (pt.u[a] - pt.u[b])
            })
            .sum()
    }

    pub fn d1(&self, i: usize, n: f64, pt: &MultivariatePoint) -> f64 {
        self.value(n, pt) * self.dlog(i, pt)
    }

    pub fn d2(&self, i: usize, n: f64, pt: &MultivariatePoint) -> f64 {
        let l = self.dlog(i, pt);
        // d_i dlog = -sum_f e_f / d_f^2 over factors containing u_i
        let dl: f64 = self
            .factors
            .iter()
            .map(|&(a, b, e)| {
                if i == a || i == b {
                    -f64::from(e) / (pt.u[a] - pt.u[b]).powi(2)
                } else {
                    0.0
                }
            })
            .sum();
        self.value(n, pt) * (l * l + dl)
    }
}

/// pairs coupling the `mu` block `{u_1, u_2}` to the `mu'` block `{u_3, u_4}`
const CROSS_PAIRS: [(usize, usize); 4] = [(0, 2), (0, 3), (1, 2), (1, 3)];

/// Truncation of `g` to the requested order in `1/N`:
/// order 1 keeps the four `1/(4N (u_i - u_j)(mu - mu'))` terms; order 2 adds
/// the square (9/32), disjoint-product (1/16) and shared-vertex (3/16) terms.
pub fn g_truncation(order: u32) -> Result<Vec<Term>, RmtError> {
    if !(1..=2).contains(&order) {
        return Err(RmtError::InvalidParameter(
            "g_truncation: order must be 1 or 2".into(),
        ));
    }
    let mut terms = vec![Term {
        coeff: 1.0,
        n_order: 0,
        mu_order: 0,
        factors: vec![],
    }];
    for &(a, b) in &CROSS_PAIRS {
        terms.push(Term {
            coeff: 0.25,
            n_order: 1,
            mu_order: 1,
            factors: vec![(a, b, -1)],
        });
    }
    if order == 2 {
        for &(a, b) in &CROSS_PAIRS {
            terms.push(Term {
                coeff: 9.0 / 32.0,
                n_order: 2,
                mu_order: 2,
                factors: vec![(a, b, -2)],
            });
        }
        // disjoint pairs
        for pair in [[(0, 2), (1, 3)], [(0, 3), (1, 2)]] {
            terms.push(Term {
                coeff: 1.0 / 16.0,
                n_order: 2,
                mu_order: 2,
                factors: pair.iter().map(|&(a, b)| (a, b, -1)).collect(),
            });
        }
        // pairs sharing one vertex
        for pair in [
            [(0, 2), (0, 3)],
            [(0, 2), (1, 2)],
            [(0, 3), (1, 3)],
            [(1, 2), (1, 3)],
        ] {
            terms.push(Term {
                coeff: 3.0 / 16.0,
                n_order: 2,
                mu_order: 2,
                factors: pair.iter().map(|&(a, b)| (a, b, -1)).collect(),
            });
        }
    }
    Ok(terms)
}

/// Apply the PDE operator to a sum of terms at `(N, point)`.
pub fn pde_apply(terms: &[Term], n: f64, pt: &MultivariatePoint) -> f64 {
    let mut res = 0.0;
    for t in terms {
        res += 2.0 * n * pt.mu * (t.d1(0, n, pt) + t.d1(1, n, pt));
        res += 2.0 * n * pt.mu_prime * (t.d1(2, n, pt) + t.d1(3, n, pt));
        for i in 0..4 {
            res += t.d2(i, n, pt);
        }
        res += (t.d1(0, n, pt) - t.d1(1, n, pt)) / (pt.u[0] - pt.u[1]);
        res += (t.d1(2, n, pt) - t.d1(3, n, pt)) / (pt.u[2] - pt.u[3]);
        let potential: f64 = CROSS_PAIRS
            .iter()
            .map(|&(a, b)| 0.5 / (pt.u[a] - pt.u[b]).powi(2))
            .sum();
        res += potential * t.value(n, pt);
    }
    res
}

/// `|PDE residual| / max |retained term|` for the order-1 or order-2
/// truncation. In the asymptotic regime this ratio is `O(1/N)` — the
/// operator's `1/(u_1-u_2)`-pole output has no canceling partner in the
/// pole-free truncation — and halves when `N` doubles at fixed separations.
pub fn multivariate_residual_check(
    order: u32,
    n: f64,
    pt: &MultivariatePoint,
) -> Result<f64, RmtError> {
    if n <= 0.0 {
        return Err(RmtError::InvalidParameter(
            "multivariate_residual_check: N > 0".into(),
        ));
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pt.u[i] == pt.u[j] {
                return Err(RmtError::Domain(format!(
                    "coincident u values at indices {i}, {j}"
                )));
            }
        }
    }
    if pt.mu == pt.mu_prime {
        return Err(RmtError::Domain("mu must differ from mu'".into()));
    }
    let terms = g_truncation(order)?;
    let residual = pde_apply(&terms, n, pt).abs();
    let largest = terms
        .iter()
        .map(|t| t.value(n, pt).abs())
        .fold(0.0, f64::max);
    Ok(residual / largest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> MultivariatePoint {
        MultivariatePoint {
            u: [1.0, 0.7, -0.6, -1.2],
            mu: 0.8,
            mu_prime: -0.5,
        }
    }

    #[test]
    fn operator_on_constant_is_potential() {
        let pt = point();
        let one = vec![Term {
            coeff: 1.0,
            n_order: 0,
            mu_order: 0,
            factors: vec![],
        }];
        let got = pde_apply(&one, 50.0, &pt);
        let want: f64 = CROSS_PAIRS
            .iter()
            .map(|&(a, b)| 0.5 / (pt.u[a] - pt.u[b]).powi(2))
            .sum();
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let pt = point();
        let terms = g_truncation(2).unwrap();
        let n = 30.0;
        let h = 1e-6;
        for t in &terms {
            for i in 0..4 {
                let mut up = pt;
                up.u[i] += h;
                let mut dn = pt;
                dn.u[i] -= h;
                let fd1 = (t.value(n, &up) - t.value(n, &dn)) / (2.0 * h);
                assert!((t.d1(i, n, &pt) - fd1).abs() < 1e-6 * (1.0 + fd1.abs()));
                let fd2 =
                    (t.value(n, &up) - 2.0 * t.value(n, &pt) + t.value(n, &dn)) / (h * h);
                assert!((t.d2(i, n, &pt) - fd2).abs() < 1e-3 * (1.0 + fd2.abs()));
            }
        }
    }

    #[test]
    fn leading_order_cancellation() {
        // with order-1 terms included the O(N^0) part of the operator output
        // cancels, so the residual ratio is small compared to the potential
        let pt = point();
        let bare = multivariate_residual_check(1, 1e6, &pt).unwrap();
        assert!(bare < 1e-4, "O(1) terms failed to cancel: {bare}");
    }

    #[test]
    fn order1_ratio_halves_when_n_doubles() {
        let pt = point();
        let r1 = multivariate_residual_check(1, 100.0, &pt).unwrap();
        let r2 = multivariate_residual_check(1, 200.0, &pt).unwrap();
        let ratio = r2 / r1;
        assert!((ratio - 0.5).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn order2_beats_order1_and_quarters() {
        let pt = point();
        let o1 = multivariate_residual_check(1, 100.0, &pt).unwrap();
        let o2 = multivariate_residual_check(2, 100.0, &pt).unwrap();
        assert!(o2 < o1, "order2 {o2} vs order1 {o1}");
        // The order-2 coefficients solve the PDE exactly through O(1/N^2):
        // every O(1/N) piece of the operator output (pole terms included)
        // cancels, so doubling N quarters the residual ratio rather than
        // merely halving it.
        let o2b = multivariate_residual_check(2, 200.0, &pt).unwrap();
        let ratio = o2b / o2;
        assert!((ratio - 0.25).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn input_validation() {
        let mut pt = point();
        pt.u[1] = pt.u[0];
        assert!(multivariate_residual_check(1, 50.0, &pt).is_err());
        let mut pt = point();
        pt.mu_prime = pt.mu;
        assert!(multivariate_residual_check(1, 50.0, &pt).is_err());
        assert!(g_truncation(3).is_err());
    }
}
