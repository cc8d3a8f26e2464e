//! The rotated log kernels `L`, their Mellin transforms, the truncated
//! transform `H_{M,tau}(s)` and the numeric truncation checks.
//!
//! Notation: `L_{theta,tau}(t) = 2 log|1 - e^{i theta} t| - log|1 - e^{i(theta+tau)} t|
//! - log|1 - e^{i(theta-tau)} t|` and `L_zeta(t) = L_{-arg zeta, tau}(t / |zeta|)`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI, TAU};

use num_complex::Complex64;

use crate::quad::{integrate_mellin, integrate_pieces, QuadConfig};
use crate::roots::{AnalyzedPgf, RootSet};
use crate::sum::NeumaierSum;
use crate::{Error, Outcome, Result};

/// Points where "sufficiently small s" is evaluated, largest first.
pub const SMALL_S_GRID: [f64; 4] = [1e-2, 5e-3, 2.5e-3, 1e-3];

/// Multiplier applied to the lemma constants that carry a `1 + o(1)` factor.
pub const SAFETY_FACTOR: f64 = 0.5;

/// Coefficient `C` in the allowance `C alpha^{1-s}` for the cheap bound.
pub const ALPHA_ALLOWANCE: f64 = 8.0;

/// Largest `tau` at which the `1 + o(1)` bounds are asserted.
pub const TAU_GATE: f64 = 0.3;

// |1 - e^{i phi} t|^2
fn q(phi: f64, t: f64) -> f64 {
    let h = libm::sin(0.5 * phi);
    (1.0 - t) * (1.0 - t) + 4.0 * t * h * h
}

/// The pair `(A, B)` with `1 - A/B = |1 - e^{i theta} t|^4 / B`, so
/// `L_{theta,tau}(t) = log(1 - A/B) / 2` wherever `B > 0`.
pub fn ab_eval(theta: f64, tau: f64, t: f64) -> (f64, f64) {
    let st = libm::sin(0.5 * tau);
    let one_minus_cos = 2.0 * st * st;
    let sin_tau = libm::sin(tau);
    let a = 4.0 * one_minus_cos * libm::cos(theta) * t * (1.0 + t * t) - 4.0 * sin_tau * sin_tau * t * t;
    let b = q(theta + tau, t) * q(theta - tau, t);
    (a, b)
}

// Unchecked kernel; may be infinite at the singular points.
fn l_raw(theta: f64, tau: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let (a, b) = ab_eval(theta, tau, t);
    if b > 0.0 {
        let r = a / b;
        if r.abs() < 0.5 {
            return 0.5 * libm::log1p(-r);
        }
    }
    libm::log(q(theta, t)) - 0.5 * (libm::log(q(theta + tau, t)) + libm::log(q(theta - tau, t)))
}

pub fn l_theta(theta: f64, tau: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::param("t", "need t >= 0"));
    }
    let v = l_raw(theta, tau, t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::LogOfZero)
    }
}

pub fn l_zeta(zeta: Complex64, tau: f64, t: f64) -> Result<f64> {
    if zeta.norm() == 0.0 {
        return Err(Error::RootAtZero);
    }
    l_theta(-zeta.arg(), tau, t / zeta.norm())
}

// theta reduced to [0, 2 pi)
fn reduce(theta: f64) -> f64 {
    let r = libm::fmod(theta, TAU);
    if r < 0.0 {
        let r = r + TAU;
        if r >= TAU {
            0.0
        } else {
            r
        }
    } else {
        r
    }
}

/// `phi_s(theta) = cos(s (theta - pi))` on `[0, 2 pi)`, extended periodically.
pub fn phi_s(theta: f64, s: f64) -> f64 {
    libm::cos(s * (reduce(theta) - PI))
}

/// `c_s = pi / (s sin(pi s))`.
pub fn c_s(s: f64) -> f64 {
    PI / (s * libm::sin(PI * s))
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::param("s", "need 0 < s < 1"))
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau < PI {
        Ok(())
    } else {
        Err(Error::param("tau", "need 0 < tau < pi"))
    }
}

/// `\int_0^inf log|1 - e^{i theta} t| t^{-(s+1)} dt = c_s phi_s(theta)`.
pub fn mellin_log_closed_form(theta: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(c_s(s) * phi_s(theta, s))
}

fn sin2_half(x: f64) -> f64 {
    let h = libm::sin(0.5 * x);
    h * h
}

/// `\int_0^inf L_zeta(t) t^{-(s+1)} dt` in closed form.
pub fn l_mellin_full(zeta: Complex64, tau: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    check_tau(tau)?;
    let rho = zeta.norm();
    if rho == 0.0 {
        return Err(Error::RootAtZero);
    }
    let theta = zeta.arg();
    if !(theta.abs() > tau) {
        return Err(Error::Hypothesis { stage: "mellin transform", detail: "need tau < |arg zeta|" });
    }
    // 2 cos A - cos B - cos C written with half-angle sines.
    let a = s * (reduce(-theta) - PI);
    let b = s * (reduce(tau - theta) - PI);
    let c = s * (reduce(tau + theta) - PI);
    let bracket = -4.0 * sin2_half(a) + 2.0 * sin2_half(b) + 2.0 * sin2_half(c);
    Ok(libm::pow(rho, -s) * c_s(s) * bracket)
}

/// Points in `t` where `L_zeta` is rough.
pub fn l_zeta_breaks(zeta: Complex64, tau: f64) -> Vec<f64> {
    let rho = zeta.norm();
    let theta = zeta.arg();
    let mut out = Vec::with_capacity(4);
    out.push(rho);
    for phi in [theta, theta + tau, theta - tau] {
        let c = libm::cos(phi);
        if c > 0.0 {
            out.push(rho * c);
        }
    }
    out
}

/// `\int_lo^hi L_zeta(t) t^{-(s+1)} dt` by adaptive quadrature;
/// `lo = 0` and `hi = inf` are allowed.
pub fn mellin_l_integral(zeta: Complex64, tau: f64, s: f64, lo: f64, hi: f64) -> Result<f64> {
    check_s(s)?;
    check_tau(tau)?;
    let rho = zeta.norm();
    if rho == 0.0 {
        return Err(Error::RootAtZero);
    }
    if hi <= lo {
        return Ok(0.0);
    }
    let theta = -zeta.arg();
    let breaks = l_zeta_breaks(zeta, tau);
    let est = integrate_mellin(|t| l_raw(theta, tau, t / rho), s, lo, hi, &breaks, &QuadConfig::default())?;
    Ok(est.value)
}

fn check_truncation(m: f64, tau: f64, s: f64) -> Result<()> {
    check_s(s)?;
    check_tau(tau)?;
    if !(m >= 1.0 && m.is_finite()) {
        return Err(Error::param("M", "need M >= 1"));
    }
    Ok(())
}

/// `H_{M,tau}(s) = \int_{1/M}^M (u(t) - u(e^{i tau} t)) t^{-(s+1)} dt`, straight
/// from the log potential.
/// Breakpoints sit at the root moduli and where the rotated ray passes
/// closest to a root.
pub fn h_truncated_quadrature(a: &AnalyzedPgf, m: f64, tau: f64, s: f64) -> Result<f64> {
    check_truncation(m, tau, s)?;
    if !(tau < a.geometry.delta) {
        return Err(Error::Hypothesis { stage: "truncated transform", detail: "need tau < delta" });
    }
    if m == 1.0 {
        return Ok(0.0);
    }
    let (lo, hi) = (1.0 / m, m);
    let mut pts = Vec::new();
    pts.push(lo);
    pts.push(1.0);
    pts.push(hi);
    let rot = Complex64::from_polar(1.0, tau);
    for (z, _) in a.roots.conjugate_classes() {
        let rho = z.norm();
        let theta = z.arg();
        for x in [rho, rho * libm::cos(theta - tau), rho * libm::cos(theta + tau)] {
            if x > lo && x < hi {
                pts.push(x);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let f = |t: f64| {
        let u0 = a.log_potential(Complex64::new(t, 0.0));
        let u1 = a.log_potential(rot * t);
        match (u0, u1) {
            (Ok(x), Ok(y)) => (x - y) * libm::pow(t, -(s + 1.0)),
            _ => f64::NAN,
        }
    };
    Ok(integrate_pieces(f, &pts, &QuadConfig::default())?.value)
}

/// The same quantity as half the sum over roots of `\int_{1/M}^M L_zeta t^{-(s+1)} dt`.
pub fn h_truncated_rootsum(rs: &RootSet, m: f64, tau: f64, s: f64) -> Result<f64> {
    check_truncation(m, tau, s)?;
    if m == 1.0 {
        return Ok(0.0);
    }
    let mut acc = NeumaierSum::new();
    for (z, mult) in rs.conjugate_classes() {
        if !(z.arg().abs() > tau) {
            return Err(Error::Hypothesis {
                stage: "truncated transform",
                detail: "need tau < |arg zeta| for every root",
            });
        }
        // L is even in the angle, so a conjugate pair contributes twice one term.
        acc.add(mult as f64 * mellin_l_integral(z, tau, s, 1.0 / m, m)?);
    }
    Ok(0.5 * acc.value())
}

/// Where `L_{theta,tau}` changes sign on `[1, inf)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignChange {
    /// `+inf` when `L >= 0` on the whole half line.
    pub lambda: f64,
    pub mu: f64,
}

impl SignChange {
    pub fn is_finite(&self) -> bool {
        self.lambda.is_finite()
    }

    /// `1 / lambda`, zero for an infinite sign change.
    pub fn inverse(&self) -> f64 {
        if self.lambda.is_finite() {
            1.0 / self.lambda
        } else {
            0.0
        }
    }
}

pub fn sign_change_lambda(theta: f64, tau: f64) -> Result<SignChange> {
    check_tau(tau)?;
    let th = theta.abs();
    if !(th > tau && th <= PI) {
        return Err(Error::Hypothesis { stage: "sign change", detail: "need tau < |theta| <= pi" });
    }
    let ct = libm::cos(th);
    let mu = (1.0 + libm::cos(tau)) / ct;
    if th >= PI / 2.0 || !(ct > 0.0) {
        return Ok(SignChange { lambda: f64::INFINITY, mu });
    }
    let disc = libm::sqrt((mu * mu - 4.0).max(0.0));
    Ok(SignChange { lambda: 0.5 * (mu + disc), mu })
}

/// One line of a truncation report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubCheck {
    pub name: &'static str,
    pub outcome: Outcome,
    /// Computed left-hand side (NaN when skipped).
    pub value: f64,
    /// Bound it was compared against (NaN when skipped).
    pub threshold: f64,
}

impl SubCheck {
    fn skipped(name: &'static str) -> Self {
        SubCheck { name, outcome: Outcome::Skipped, value: f64::NAN, threshold: f64::NAN }
    }

    fn compare(name: &'static str, value: f64, threshold: f64) -> Self {
        SubCheck { name, outcome: Outcome::from_bool(value >= threshold), value, threshold }
    }

    pub fn slack(&self) -> f64 {
        self.value - self.threshold
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncationReport {
    pub s: f64,
    pub safety_factor: f64,
    pub allowance: f64,
    pub checks: Vec<SubCheck>,
}

impl TruncationReport {
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|c| c.outcome.is_fail())
    }

    pub fn get(&self, name: &str) -> Option<&SubCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn is_small_s(s: f64) -> bool {
    s <= SMALL_S_GRID[0]
}

/// Evaluate the truncation bounds for one root.
///
/// * `positivity`: `\int_{1/M}^M L_zeta t^{-(s+1)} >= -1e-10`.
/// * `eps-bound`: the same integral against `|zeta|^{-s} 2^{-10} eps tau^2`
///   (times the safety factor) when `|arg zeta| >= pi/4`.
/// * `cheap-bound`: against `|zeta|^{-s}(tau^2/2 - 8 alpha^{1-s})`,
///   `alpha = max(|zeta|, 1/|zeta|)/M`.
/// * `unit-interval`: `\int_0^1 L_{theta,tau} t^{-(s+1)}` within 10% of `tau^2/2`,
///   at `s = 1e-3`.
/// * `near-one`: `\int_{1-eps}^1 L_{theta,tau} t^{-(s+1)} >= eps tau^2 / 2^9`
///   (times the safety factor).
///
/// The last four need small `s`; the bounds with a safety factor also need
/// `tau <= 0.3`.  Checks whose hypotheses fail are skipped.
pub fn truncation_lemma_checks(zeta: Complex64, tau: f64, m: f64, eps: f64, s: f64) -> Result<TruncationReport> {
    check_truncation(m, tau, s)?;
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::param("eps", "need 0 < eps <= 1/2"));
    }
    let rho = zeta.norm();
    if rho == 0.0 {
        return Err(Error::RootAtZero);
    }
    let arg = zeta.arg().abs();
    let theta = -zeta.arg();
    let small = is_small_s(s);
    let in_sector = arg > tau;
    let in_annulus = rho >= 1.0 / m && rho <= m;
    let main_hyp = in_sector && in_annulus && m >= 1.0 + eps;
    let mut checks = Vec::with_capacity(5);

    let trunc = if in_sector { Some(mellin_l_integral(zeta, tau, s, 1.0 / m, m)?) } else { None };
    let rho_s = libm::pow(rho, -s);

    checks.push(match (main_hyp, trunc) {
        (true, Some(v)) => SubCheck::compare("positivity", v, -1e-10),
        _ => SubCheck::skipped("positivity"),
    });

    checks.push(match (main_hyp && small && arg >= FRAC_PI_4 && tau <= TAU_GATE, trunc) {
        (true, Some(v)) => {
            let bound = SAFETY_FACTOR * rho_s * libm::exp2(-10.0) * eps * tau * tau;
            SubCheck::compare("eps-bound", v, bound)
        }
        _ => SubCheck::skipped("eps-bound"),
    });

    let alpha = rho.max(1.0 / rho) / m;
    checks.push(match (in_sector && small && alpha < 1.0, trunc) {
        (true, Some(v)) => {
            let bound = rho_s * (0.5 * tau * tau - ALPHA_ALLOWANCE * libm::pow(alpha, 1.0 - s));
            SubCheck::compare("cheap-bound", v, bound)
        }
        _ => SubCheck::skipped("cheap-bound"),
    });

    if in_sector && small {
        let s0 = SMALL_S_GRID[SMALL_S_GRID.len() - 1];
        let unit = Complex64::from_polar(1.0, -theta);
        let v = mellin_l_integral(unit, tau, s0, 0.0, 1.0)?;
        let target = 0.5 * tau * tau;
        let rel = (v - target).abs() / target;
        checks.push(SubCheck {
            name: "unit-interval",
            outcome: Outcome::from_bool(rel <= 0.1),
            value: v,
            threshold: target,
        });
    } else {
        checks.push(SubCheck::skipped("unit-interval"));
    }

    let near_one = if in_sector && small && arg > FRAC_PI_4 && tau <= TAU_GATE {
        let lam = sign_change_lambda(theta, tau)?;
        if lam.inverse() <= 1.0 - eps {
            let unit = Complex64::from_polar(1.0, -theta);
            let v = mellin_l_integral(unit, tau, s, 1.0 - eps, 1.0)?;
            let bound = SAFETY_FACTOR * eps * tau * tau * libm::exp2(-9.0);
            SubCheck::compare("near-one", v, bound)
        } else {
            SubCheck::skipped("near-one")
        }
    } else {
        SubCheck::skipped("near-one")
    };
    checks.push(near_one);

    Ok(TruncationReport { s, safety_factor: SAFETY_FACTOR, allowance: ALPHA_ALLOWANCE, checks })
}

/// `truncation_lemma_checks` at every point of the small-s grid.
pub fn truncation_small_s_sweep(zeta: Complex64, tau: f64, m: f64, eps: f64) -> Result<Vec<TruncationReport>> {
    SMALL_S_GRID.iter().map(|&s| truncation_lemma_checks(zeta, tau, m, eps, s)).collect()
}
