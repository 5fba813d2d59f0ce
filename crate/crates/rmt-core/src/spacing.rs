//! Level-spacing functions `E(s)` for GUE/GOE/GSE by two independent routes.
//!
//! `E(s)` is the probability that an interval of unfolded length `s` in the
//! spectral bulk contains no eigenvalue; `p(s) = E''(s)` is the level-spacing
//! density.  Two routes are implemented and cross-validated:
//!
//! * **Nyström** ([`fredholm_e_gue`]): the Fredholm determinant
//!   `det[1 - K]` of the sine kernel on `[-s/2, s/2]`, discretised on
//!   Gauss–Legendre nodes.  Unambiguous, convention-free, but GUE-only.
//! * **Hamiltonian ODE** ([`tw_integrate`], [`e_gue_ode`], [`e_goe`],
//!   [`e_gse`]): the Painlevé-type system
//!   `dQ/db = P(1 - 2Q²/b)`, `dP/db = Q(2P²/b - 1)` with Hamiltonian
//!   `H(b,b) = P² + Q² - 2P²Q²/b` and `H(b,-b) = QP/b`; the gap
//!   probabilities are exponentials of integrals of `H` along the
//!   trajectory.  This route covers all three ensembles.
//!
//! Two kernel conventions are supported (see [`KernelConvention`]).  The
//! unit-density convention uses `K(x,y) = sin(pi(x-y))/(pi(x-y))` so the mean
//! spacing is 1; the pi-less convention uses `sin(x-y)/(x-y)`.  On the ODE
//! route the convention enters through a single coupling/argument pair
//! `(a, alpha)` with `a = 1/sqrt(alpha)`: the initial data `Q ~ a·b` and the
//! argument mapping `b = alpha·s/2`.  The unit-density values
//! `(1/sqrt(pi), pi)` are fixed once by calibrating against the Nyström
//! determinant (see the `calibration_recovers_alpha_pi` test) and reused
//! unchanged for GOE/GSE.

use crate::error::RmtError;
use crate::quad::gauss_legendre;
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Kernel normalisation convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelConvention {
    /// `K(x,y) = sin(pi(x-y))/(pi(x-y))`: unit mean level density, so `s` is
    /// measured in mean spacings.  Default.
    UnitDensity,
    /// `K(x,y) = sin(x-y)/(x-y)`: the oscillation scale carries no `pi`.
    /// Retained because the small-`s` GOE cubic coefficient in this
    /// convention is the literal `1/36` (vs `pi^2/36` at unit density).
    PiLess,
}

impl KernelConvention {
    /// Oscillation frequency of the kernel: `sin(c(x-y))/(c(x-y))`.
    fn frequency(self) -> f64 {
        match self {
            KernelConvention::UnitDensity => std::f64::consts::PI,
            KernelConvention::PiLess => 1.0,
        }
    }

    /// Argument-mapping constant of the ODE route: `b = alpha * s / 2`.
    pub fn alpha(self) -> f64 {
        self.frequency()
    }

    /// ODE initial-data coupling: `Q(b) ~ a·b` as `b -> 0`, `a = 1/sqrt(alpha)`.
    pub fn coupling(self) -> f64 {
        1.0 / self.alpha().sqrt()
    }
}

/// Route by which a [`SpacingCurve`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Nystrom,
    Hamiltonian,
}

/// Ensemble selector for spacing curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingEnsemble {
    Gue,
    Goe,
    Gse,
}

/// A quadrature rule on a finite interval.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

impl QuadratureRule {
    /// Gauss–Legendre rule with `order` nodes on `(a, b)`.
    pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Result<Self, RmtError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(RmtError::InvalidParameter(
                "quadrature interval must be finite with a < b".into(),
            ));
        }
        if order == 0 {
            return Err(RmtError::InvalidParameter(
                "quadrature order must be positive".into(),
            ));
        }
        let (x, w) = gauss_legendre(order);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        Ok(Self {
            nodes: x.iter().map(|&t| mid + half * t).collect(),
            weights: w.iter().map(|&wi| half * wi).collect(),
            interval: (a, b),
        })
    }
}

fn sine_kernel_conv(x: f64, y: f64, freq: f64) -> f64 {
    let u = freq * (x - y);
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

fn nystrom_det(s: f64, order: usize, freq: f64) -> f64 {
    let rule = QuadratureRule::gauss_legendre(order, -0.5 * s, 0.5 * s)
        .expect("interval validated by caller");
    let sqrt_w: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let m = DMatrix::from_fn(order, order, |i, j| {
        let k = sine_kernel_conv(rule.nodes[i], rule.nodes[j], freq);
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - sqrt_w[i] * sqrt_w[j] * k
    });
    m.lu().determinant()
}

/// GUE gap probability by the Nyström-discretised Fredholm determinant, in a
/// chosen kernel convention.
///
/// Builds the `order x order` matrix `delta_ij - sqrt(w_i w_j) K(x_i, x_j)`
/// on Gauss–Legendre nodes of `[-s/2, s/2]` and returns its determinant.
/// The result is checked by doubling the order; if the two determinants
/// differ by more than `1e-8` an accuracy error is returned.
pub fn fredholm_e_gue_with(
    s: f64,
    order: usize,
    convention: KernelConvention,
) -> Result<f64, RmtError> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(RmtError::InvalidParameter(
            "gap length s must be positive and finite".into(),
        ));
    }
    if order < 10 {
        return Err(RmtError::InvalidParameter(
            "Nystrom order must be at least 10".into(),
        ));
    }
    checked_det(s, order, convention.frequency())
}

/// Order-doubling convergence check shared by the public entry points.
fn checked_det(s: f64, order: usize, freq: f64) -> Result<f64, RmtError> {
    let det = nystrom_det(s, order, freq);
    let det2 = nystrom_det(s, 2 * order, freq);
    if (det - det2).abs() > 1e-8 {
        return Err(RmtError::QuadratureAccuracy(format!(
            "Nystrom order {order} too small at s = {s}: doubling the order moves E by {:.3e}",
            (det - det2).abs()
        )));
    }
    Ok(det)
}

/// GUE gap probability `E(s)` by the Nyström route, unit-density convention.
pub fn fredholm_e_gue(s: f64, order: usize) -> Result<f64, RmtError> {
    fredholm_e_gue_with(s, order, KernelConvention::UnitDensity)
}

/// One point of the Hamiltonian trajectory.
#[derive(Debug, Clone, Copy)]
pub struct HamiltonianState {
    pub b: f64,
    pub p: f64,
    pub q: f64,
}

impl HamiltonianState {
    /// `H(b, b) = P² + Q² - 2 P² Q² / b`.
    pub fn h_diag(&self) -> f64 {
        let p2 = self.p * self.p;
        let q2 = self.q * self.q;
        p2 + q2 - 2.0 * p2 * q2 / self.b
    }

    /// `H(b, -b) = Q P / b`.
    pub fn h_anti(&self) -> f64 {
        self.q * self.p / self.b
    }
}

/// Small-`b` series for `Q(b)` with coupling `a`: `Q = a b - (a/6) b³ + O(b⁴)`.
pub(crate) fn series_q(a: f64, b: f64) -> f64 {
    a * b - (a / 6.0) * b.powi(3)
}

/// Small-`b` series for `P(b)` with coupling `a`:
/// `P = a + 2a³ b + (4a⁵ - a/2) b² + (8a⁷ - 7a³/9) b³ + O(b⁴)`.
///
/// At `a = 1` this is `1 + 2b + (7/2)b² + (65/9)b³`, i.e. the series
/// `1 + s + (7/8)s² + (65/72)s³` in the doubled variable `s = 2b`.
pub(crate) fn series_p(a: f64, b: f64) -> f64 {
    let a3 = a.powi(3);
    a + 2.0 * a3 * b + (4.0 * a.powi(5) - 0.5 * a) * b * b
        + (8.0 * a.powi(7) - 7.0 / 9.0 * a3) * b.powi(3)
}

fn ode_rhs(b: f64, q: f64, p: f64) -> (f64, f64) {
    (p * (1.0 - 2.0 * q * q / b), q * (2.0 * p * p / b - 1.0))
}

const BLOWUP_GUARD: f64 = 1e6;
const DEFAULT_B0: f64 = 1e-3;
const DEFAULT_STEP: f64 = 1e-4;

/// An integrated Hamiltonian trajectory with cumulative `H` integrals,
/// shareable read-only across an `s`-grid.
#[derive(Debug, Clone)]
pub struct TwTrajectory {
    convention: KernelConvention,
    b0: f64,
    step: f64,
    states: Vec<HamiltonianState>,
    /// `int_0^{b_i} H(b,b) db` at each stored state.
    ih_diag: Vec<f64>,
    /// `int_0^{b_i} H(b,-b) db` at each stored state.
    ih_anti: Vec<f64>,
}

impl TwTrajectory {
    /// Integrate the trajectory out to `b_max` with a fixed-step classical
    /// 4th-order Runge–Kutta scheme, starting at `b0` from the small-`b`
    /// series.  Aborts with [`RmtError::OdeBlowUp`] if `|P|` or `|Q|`
    /// exceeds `1e6`.
    pub fn integrate(
        b_max: f64,
        step: f64,
        b0: f64,
        convention: KernelConvention,
    ) -> Result<Self, RmtError> {
        if !(step > 0.0 && step <= 1e-3) {
            return Err(RmtError::InvalidParameter(
                "ODE step must be in (0, 1e-3]".into(),
            ));
        }
        if !(b0 > 0.0 && b0 <= 1e-2) {
            return Err(RmtError::InvalidParameter(
                "series starting point b0 must be in (0, 1e-2]".into(),
            ));
        }
        if !(b_max > b0 && b_max.is_finite()) {
            return Err(RmtError::InvalidParameter(
                "b_max must exceed the series starting point".into(),
            ));
        }
        let a = convention.coupling();
        let n_steps = ((b_max - b0) / step).ceil() as usize + 1;
        let mut states = Vec::with_capacity(n_steps + 1);
        let mut ih_diag = Vec::with_capacity(n_steps + 1);
        let mut ih_anti = Vec::with_capacity(n_steps + 1);

        // Seed [0, b0] from the series (Simpson; both H limits at b -> 0 are a²).
        let first = HamiltonianState {
            b: b0,
            q: series_q(a, b0),
            p: series_p(a, b0),
        };
        let mid = HamiltonianState {
            b: 0.5 * b0,
            q: series_q(a, 0.5 * b0),
            p: series_p(a, 0.5 * b0),
        };
        let a2 = a * a;
        let mut acc_diag = b0 / 6.0 * (a2 + 4.0 * mid.h_diag() + first.h_diag());
        let mut acc_anti = b0 / 6.0 * (a2 + 4.0 * mid.h_anti() + first.h_anti());
        states.push(first);
        ih_diag.push(acc_diag);
        ih_anti.push(acc_anti);

        let mut b = b0;
        let mut q = first.q;
        let mut p = first.p;
        for _ in 0..n_steps {
            let h = step;
            let (k1q, k1p) = ode_rhs(b, q, p);
            let (k2q, k2p) = ode_rhs(b + 0.5 * h, q + 0.5 * h * k1q, p + 0.5 * h * k1p);
            let (k3q, k3p) = ode_rhs(b + 0.5 * h, q + 0.5 * h * k2q, p + 0.5 * h * k2p);
            let (k4q, k4p) = ode_rhs(b + h, q + h * k3q, p + h * k3p);
            q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
            p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            b += h;
            if !(q.is_finite() && p.is_finite()) || q.abs() > BLOWUP_GUARD || p.abs() > BLOWUP_GUARD
            {
                return Err(RmtError::OdeBlowUp(format!(
                    "trajectory left the guard region near b = {b:.6}"
                )));
            }
            let state = HamiltonianState { b, q, p };
            let prev = *states.last().expect("seeded above");
            acc_diag += 0.5 * h * (prev.h_diag() + state.h_diag());
            acc_anti += 0.5 * h * (prev.h_anti() + state.h_anti());
            states.push(state);
            ih_diag.push(acc_diag);
            ih_anti.push(acc_anti);
            if b >= b_max {
                break;
            }
        }
        Ok(Self {
            convention,
            b0,
            step,
            states,
            ih_diag,
            ih_anti,
        })
    }

    pub fn convention(&self) -> KernelConvention {
        self.convention
    }

    pub fn states(&self) -> &[HamiltonianState] {
        &self.states
    }

    pub fn b_max(&self) -> f64 {
        self.states.last().map_or(self.b0, |s| s.b)
    }

    /// `int_0^t H db` for the chosen component, by series on `[0, b0]` and
    /// linear interpolation of the cumulative trapezoid sums beyond.
    fn integral(&self, t: f64, anti: bool) -> Result<f64, RmtError> {
        if t < 0.0 {
            return Err(RmtError::InvalidParameter(
                "integral endpoint must be nonnegative".into(),
            ));
        }
        let a = self.convention.coupling();
        let a2 = a * a;
        if t <= self.b0 {
            if t == 0.0 {
                return Ok(0.0);
            }
            // Simpson on [0, t] from the series.
            let eval = |b: f64| -> f64 {
                if b == 0.0 {
                    return a2;
                }
                let st = HamiltonianState {
                    b,
                    q: series_q(a, b),
                    p: series_p(a, b),
                };
                if anti {
                    st.h_anti()
                } else {
                    st.h_diag()
                }
            };
            return Ok(t / 6.0 * (a2 + 4.0 * eval(0.5 * t) + eval(t)));
        }
        if t > self.b_max() + 1e-12 {
            return Err(RmtError::InvalidParameter(format!(
                "trajectory only extends to b = {:.6}, requested {t:.6}",
                self.b_max()
            )));
        }
        let table = if anti { &self.ih_anti } else { &self.ih_diag };
        let pos = (t - self.b0) / self.step;
        let i = (pos.floor() as usize).min(table.len() - 1);
        if i + 1 >= table.len() {
            return Ok(table[i]);
        }
        let frac = pos - i as f64;
        Ok(table[i] + frac * (table[i + 1] - table[i]))
    }

    /// GUE gap probability from the trajectory:
    /// `E(s) = exp(-2 int_0^{alpha s / 2} H(b,b) db)`.
    pub fn e_gue(&self, s: f64) -> Result<f64, RmtError> {
        let t = 0.5 * self.convention.alpha() * s;
        Ok((-2.0 * self.integral(t, false)?).exp())
    }

    /// GOE gap probability:
    /// `E(s) = exp(-int_0^{alpha s / 2} [H(b,b) + H(b,-b)] db)`.
    pub fn e_goe(&self, s: f64) -> Result<f64, RmtError> {
        let t = 0.5 * self.convention.alpha() * s;
        Ok((-(self.integral(t, false)? + self.integral(t, true)?)).exp())
    }

    /// GSE gap probability, from the even/odd split over the doubled range:
    /// `E(s) = (1/2)[exp(-int_0^{alpha s} (H+H_-) db) + exp(-int_0^{alpha s} (H-H_-) db)]`.
    pub fn e_gse(&self, s: f64) -> Result<f64, RmtError> {
        let t = self.convention.alpha() * s;
        let d = self.integral(t, false)?;
        let a = self.integral(t, true)?;
        Ok(0.5 * ((-(d + a)).exp() + (-(d - a)).exp()))
    }
}

/// Integrate the Hamiltonian system far enough to evaluate any of the three
/// ensembles' gap probabilities up to `s_max`, unit-density convention.
pub fn tw_integrate(s_max: f64, step: f64) -> Result<TwTrajectory, RmtError> {
    if !(s_max > 0.0 && s_max <= 3.0) {
        return Err(RmtError::InvalidParameter(
            "s_max must lie in (0, 3] (validated range)".into(),
        ));
    }
    let conv = KernelConvention::UnitDensity;
    // GSE needs the doubled range b = alpha * s.
    TwTrajectory::integrate(conv.alpha() * s_max + 10.0 * step, step, DEFAULT_B0, conv)
}

/// GUE gap probability by the ODE route (unit-density convention).
pub fn e_gue_ode(s: f64) -> Result<f64, RmtError> {
    if s == 0.0 {
        return Ok(1.0);
    }
    let traj = TwTrajectory::integrate(
        0.5 * std::f64::consts::PI * s + 10.0 * DEFAULT_STEP,
        DEFAULT_STEP,
        DEFAULT_B0,
        KernelConvention::UnitDensity,
    )?;
    traj.e_gue(s)
}

/// GOE gap probability by the ODE route (unit-density convention).
pub fn e_goe(s: f64) -> Result<f64, RmtError> {
    if s == 0.0 {
        return Ok(1.0);
    }
    let traj = TwTrajectory::integrate(
        0.5 * std::f64::consts::PI * s + 10.0 * DEFAULT_STEP,
        DEFAULT_STEP,
        DEFAULT_B0,
        KernelConvention::UnitDensity,
    )?;
    traj.e_goe(s)
}

/// GSE gap probability by the ODE route (unit-density convention).
pub fn e_gse(s: f64) -> Result<f64, RmtError> {
    if s == 0.0 {
        return Ok(1.0);
    }
    let traj = TwTrajectory::integrate(
        std::f64::consts::PI * s + 10.0 * DEFAULT_STEP,
        DEFAULT_STEP,
        DEFAULT_B0,
        KernelConvention::UnitDensity,
    )?;
    traj.e_gse(s)
}

/// A sampled gap-probability curve.
#[derive(Debug, Clone)]
pub struct SpacingCurve {
    pub s_grid: Vec<f64>,
    pub e_values: Vec<f64>,
    pub route: Route,
    pub ensemble: SpacingEnsemble,
    pub convention: KernelConvention,
}

impl SpacingCurve {
    /// Evaluate `E(s)` on a grid.  The ODE route shares one precomputed
    /// trajectory across the (parallel) grid evaluation; the Nyström route
    /// is available for GUE only.
    pub fn compute(
        ensemble: SpacingEnsemble,
        route: Route,
        convention: KernelConvention,
        s_grid: &[f64],
    ) -> Result<Self, RmtError> {
        if s_grid.is_empty() {
            return Err(RmtError::InvalidParameter("empty s grid".into()));
        }
        let mut last = 0.0;
        for &s in s_grid {
            if !(s > last && s <= 3.0) {
                return Err(RmtError::InvalidParameter(
                    "s grid must be strictly increasing, positive, and within s <= 3".into(),
                ));
            }
            last = s;
        }
        let e_values: Vec<f64> = match route {
            Route::Nystrom => {
                if ensemble != SpacingEnsemble::Gue {
                    return Err(RmtError::InvalidParameter(
                        "the Nystrom route is implemented for GUE only".into(),
                    ));
                }
                s_grid
                    .par_iter()
                    .map(|&s| fredholm_e_gue_with(s, 40, convention))
                    .collect::<Result<_, _>>()?
            }
            Route::Hamiltonian => {
                let s_max = *s_grid.last().expect("nonempty");
                let b_max = match ensemble {
                    SpacingEnsemble::Gse => convention.alpha() * s_max,
                    _ => 0.5 * convention.alpha() * s_max,
                } + 10.0 * DEFAULT_STEP;
                let traj =
                    TwTrajectory::integrate(b_max, DEFAULT_STEP, DEFAULT_B0, convention)?;
                s_grid
                    .par_iter()
                    .map(|&s| match ensemble {
                        SpacingEnsemble::Gue => traj.e_gue(s),
                        SpacingEnsemble::Goe => traj.e_goe(s),
                        SpacingEnsemble::Gse => traj.e_gse(s),
                    })
                    .collect::<Result<_, _>>()?
            }
        };
        Ok(Self {
            s_grid: s_grid.to_vec(),
            e_values,
            route,
            ensemble,
            convention,
        })
    }
}

/// Level-spacing density `p(s) = E''(s)` by central second differences
/// (one-sided 4-point stencils at the endpoints).  Requires a uniform grid
/// of at least 5 points.
pub fn spacing_density(curve: &SpacingCurve) -> Result<Vec<f64>, RmtError> {
    let n = curve.s_grid.len();
    if n < 5 {
        return Err(RmtError::InvalidParameter(
            "spacing density needs at least 5 grid points".into(),
        ));
    }
    let h = curve.s_grid[1] - curve.s_grid[0];
    for w in curve.s_grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0) {
            return Err(RmtError::InvalidParameter(
                "spacing density requires a uniform grid".into(),
            ));
        }
    }
    let e = &curve.e_values;
    let h2 = h * h;
    let mut p = vec![0.0; n];
    p[0] = (2.0 * e[0] - 5.0 * e[1] + 4.0 * e[2] - e[3]) / h2;
    p[n - 1] = (2.0 * e[n - 1] - 5.0 * e[n - 2] + 4.0 * e[n - 3] - e[n - 4]) / h2;
    for i in 1..n - 1 {
        p[i] = (e[i - 1] - 2.0 * e[i] + e[i + 1]) / h2;
    }
    Ok(p)
}
