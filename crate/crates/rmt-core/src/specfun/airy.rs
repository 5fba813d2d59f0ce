//! Airy function Ai, its derivative, and the ODE-enforced second derivative.

/// Result of an Airy evaluation. `ai_second` is returned as `x * ai`, so the
/// ODE residual `Ai'' - x Ai` vanishes identically by construction.
#[derive(Debug, Clone, Copy)]
pub struct AiryAi {
    pub ai: f64,
    pub ai_prime: f64,
    pub ai_second: f64,
    /// false outside the documented validated range `|x| <= 20`
    pub in_validated_range: bool,
}

const AI0: f64 = 0.355_028_053_887_817_24; // 3^{-2/3}/Gamma(2/3)
const AIP0: f64 = -0.258_819_403_792_806_8; // -3^{-1/3}/Gamma(1/3)

/// Evaluate `Ai(x)` and `Ai'(x)`.
///
/// Maclaurin series on `[-8, 5.5]`, asymptotic expansions beyond (both
/// branches agree near the crossovers; see tests). The validated range is
/// `|x| <= 20`.
pub fn airy_ai(x: f64) -> AiryAi {
    let (ai, ai_prime) = if (-8.0..=5.5).contains(&x) {
        maclaurin(x)
    } else if x > 5.5 {
        asymptotic_pos(x)
    } else {
        asymptotic_neg(-x)
    };
    AiryAi {
        ai,
        ai_prime,
        ai_second: x * ai,
        in_validated_range: x.abs() <= 20.0,
    }
}

/// Taylor solution of y'' = x y around 0:
/// Ai = Ai(0) u1 + Ai'(0) u2 with u1(0)=1, u1'(0)=0 and u2(0)=0, u2'(0)=1.
fn maclaurin(x: f64) -> (f64, f64) {
    // u1 = sum t1_k, t1_0 = 1, t1_{k} has power x^{3k}
    // u2 = sum t2_k, t2_0 = x, t2_{k} has power x^{3k+1}
    let x3 = x * x * x;
    let mut t1 = 1.0;
    let mut t2 = x;
    let mut u1 = t1;
    let mut u2 = t2;
    let mut du1 = 0.0;
    let mut du2 = 1.0;
    for k in 1..=120 {
        let kf = k as f64;
        t1 *= x3 / ((3.0 * kf) * (3.0 * kf - 1.0));
        t2 *= x3 / ((3.0 * kf + 1.0) * (3.0 * kf));
        u1 += t1;
        u2 += t2;
        // derivatives: d/dx x^{3k} = 3k x^{3k-1}; handle via term/x (x != 0 path)
        if x != 0.0 {
            du1 += 3.0 * kf * t1 / x;
            du2 += (3.0 * kf + 1.0) * t2 / x;
        }
        if t1.abs() < 1e-18 * u1.abs().max(1e-3) && t2.abs() < 1e-18 * u2.abs().max(1e-3) {
            break;
        }
    }
    (AI0 * u1 + AIP0 * u2, AI0 * du1 + AIP0 * du2)
}

/// u_k, v_k coefficients of the standard Airy asymptotic expansions.
fn uv_coefficients(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..=n {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(uk * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf));
    }
    (u, v)
}

fn asymptotic_pos(x: f64) -> (f64, f64) {
    let xi = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = uv_coefficients(40);
    let mut su = 0.0;
    let mut sv = 0.0;
    let mut best = f64::INFINITY;
    for k in 0..u.len() {
        let term = u[k] / xi.powi(k as i32);
        if term.abs() > best {
            break; // past optimal truncation
        }
        best = term.abs();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += sign * term;
        sv += sign * v[k] / xi.powi(k as i32);
    }
    let pref = (-xi).exp() / (2.0 * std::f64::consts::PI.sqrt());
    (pref / x.powf(0.25) * su, -pref * x.powf(0.25) * sv)
}

/// Oscillatory branch for `Ai(-t)`, `t > 0`.
fn asymptotic_neg(t: f64) -> (f64, f64) {
    let xi = 2.0 / 3.0 * t.powf(1.5);
    let (u, v) = uv_coefficients(40);
    // even/odd splits: sum_k (-1)^k u_{2k}/xi^{2k}, sum_k (-1)^k u_{2k+1}/xi^{2k+1}
    let mut ue = 0.0;
    let mut uo = 0.0;
    let mut ve = 0.0;
    let mut vo = 0.0;
    let mut best = f64::INFINITY;
    for k in 0..u.len() {
        let term = u[k] / xi.powi(k as i32);
        if term.abs() > best {
            break;
        }
        best = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ue += sign * term;
            ve += sign * v[k] / xi.powi(k as i32);
        } else {
            uo += sign * term;
            vo += sign * v[k] / xi.powi(k as i32);
        }
    }
    let phase = xi + std::f64::consts::FRAC_PI_4;
    let sp = std::f64::consts::PI.sqrt();
    let ai = (phase.sin() * ue - phase.cos() * uo) / (sp * t.powf(0.25));
    let aip = -(phase.cos() * ve + phase.sin() * vo) * t.powf(0.25) / sp;
    (ai, aip)
}
