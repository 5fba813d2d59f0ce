//! Numerical random matrix theory for the Gaussian orthogonal, unitary and
//! symplectic ensembles.
//!
//! The crate is organised around a chain of cross-validating routes to the
//! same spectral observables:
//!
//! * [`ensembles`] — Monte Carlo sampling of GOE/GUE/GSE spectra, optionally
//!   with a deterministic external source, and estimators for averaged
//!   characteristic-polynomial quantities.
//! * [`exactfn`] — exact finite-`N` Hermite/quadrature formulas for ratios
//!   and moments of characteristic polynomials; the oracles for Monte Carlo.
//! * [`hiz`] — the exact-rational asymptotic series of the heat-kernel
//!   (Harish-Chandra/Itzykson-Zuber) group integral for general `β` and
//!   replica dimension `k`, plus the zero-replica constants.
//! * [`kernels`] — closed-form scaling-limit correlation functions: sine
//!   kernel, bulk two-point functions, Airy edge forms, general-`β`
//!   characteristic-polynomial correlators.
//! * [`spacing`] — level-spacing functions `E(s)` by two independent routes:
//!   Nyström-discretised Fredholm determinants and a Hamiltonian ODE system.
//! * [`source`] — densities of states with an external matrix source via the
//!   Pastur self-consistent equation.
//!
//! ```
//! use rmt_core::kernels;
//!
//! // Bulk GUE two-point function in the Dyson variable x = pi N rho dlambda.
//! let r = kernels::rho2_gue(std::f64::consts::PI);
//! assert!((r - 1.0).abs() < 1e-12);
//! ```

pub mod ensembles;
pub mod error;
pub mod exactfn;
pub mod hiz;
pub mod kernels;
pub mod output;
pub mod quad;
pub mod source;
pub mod spacing;
pub mod specfun;
pub mod validate;

pub use error::RmtError;

/// Absolute/relative tolerance pair used by the quadrature-backed routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracySpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl AccuracySpec {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self, RmtError> {
        if abs_tol <= 0.0 || rel_tol <= 0.0 {
            return Err(RmtError::InvalidParameter(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(Self { abs_tol, rel_tol })
    }
}

impl Default for AccuracySpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
        }
    }
}
