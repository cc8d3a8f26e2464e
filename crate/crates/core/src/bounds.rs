//! Bound shapes in terms of `(delta, R, n)` and the verification chain
//! `Var -> phi_gamma(1) -> H_{M,tau}(s) -> n tau^2`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::cumulants::normalized_cumulants;
use crate::harmonic::{kernel_floor, kernel_floor_shape, phi_integral_identity_residual, potential_property_checks};
use crate::mellin::{h_truncated_quadrature, h_truncated_rootsum, truncation_lemma_checks, SubCheck};
use crate::roots::{obrechkoff_check, AnalyzedPgf, SectorGeometry};
use crate::{AnalysisConfig, Distribution, Error, Outcome, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundShapes {
    /// `R^{-2 pi/delta} n`.
    pub basic: f64,
    /// `max(eps, delta) delta^{-1} R^{-2 pi/delta} n` with `eps = min(R - 1, 0.99)`.
    pub sharper: f64,
    /// `delta^{-1} R^{pi/delta} n^{-1/2}`.
    pub lwo: f64,
    pub eps: f64,
}

pub fn bound_shapes(geom: &SectorGeometry) -> BoundShapes {
    let n = geom.degree as f64;
    let d = geom.delta;
    let lr = libm::log(geom.r);
    let basic = libm::exp(-2.0 * PI / d * lr) * n;
    let eps = (geom.r - 1.0).clamp(0.0, 0.99);
    let sharper = eps.max(d) / d * basic;
    let lwo = libm::exp(PI / d * lr) / (d * libm::sqrt(n));
    BoundShapes { basic, sharper, lwo, eps }
}

/// Anti-concentration and normal-approximation quantities divided by the
/// `lwo` shape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorollaryRatios {
    pub mode_ratio: f64,
    pub clt_ratio: f64,
}

pub fn corollary_ratios(d: &Distribution, geom: &SectorGeometry) -> Result<CorollaryRatios> {
    if !(d.variance() > 0.0) {
        return Err(Error::Degenerate);
    }
    let lwo = bound_shapes(geom).lwo;
    Ok(CorollaryRatios { mode_ratio: d.mode_prob() / lwo, clt_ratio: d.kolmogorov_distance()? / lwo })
}

/// The individual checks attached to a verification report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    Sector,
    PhiPositivity,
    HNonnegative,
    WeakPositivity,
    RotationalDecrease,
    RootSum,
    PoissonIdentity,
    KernelFloor,
    Obrechkoff,
    Truncation,
    Cumulants,
}

impl CheckKind {
    pub const ALL: [CheckKind; 11] = [
        CheckKind::Sector,
        CheckKind::PhiPositivity,
        CheckKind::HNonnegative,
        CheckKind::WeakPositivity,
        CheckKind::RotationalDecrease,
        CheckKind::RootSum,
        CheckKind::PoissonIdentity,
        CheckKind::KernelFloor,
        CheckKind::Obrechkoff,
        CheckKind::Truncation,
        CheckKind::Cumulants,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Sector => "sector hypothesis",
            CheckKind::PhiPositivity => "phi positivity",
            CheckKind::HNonnegative => "H nonnegative",
            CheckKind::WeakPositivity => "weak positivity",
            CheckKind::RotationalDecrease => "rotational decrease",
            CheckKind::RootSum => "root-sum identity",
            CheckKind::PoissonIdentity => "poisson identity",
            CheckKind::KernelFloor => "kernel floor",
            CheckKind::Obrechkoff => "obrechkoff",
            CheckKind::Truncation => "truncation",
            CheckKind::Cumulants => "cumulant identities",
        }
    }

    /// Accepts the display name or a short slug (`sector`, `phi`, `h`, `weak`,
    /// `rotation`, `rootsum`, `poisson`, `floor`, `obrechkoff`, `truncation`,
    /// `cumulants`).
    pub fn from_name(s: &str) -> Option<Self> {
        let slug = match s {
            "sector" => Some(CheckKind::Sector),
            "phi" => Some(CheckKind::PhiPositivity),
            "h" | "H" => Some(CheckKind::HNonnegative),
            "weak" => Some(CheckKind::WeakPositivity),
            "rotation" => Some(CheckKind::RotationalDecrease),
            "rootsum" => Some(CheckKind::RootSum),
            "poisson" => Some(CheckKind::PoissonIdentity),
            "floor" => Some(CheckKind::KernelFloor),
            "obrechkoff" => Some(CheckKind::Obrechkoff),
            "truncation" => Some(CheckKind::Truncation),
            "cumulants" => Some(CheckKind::Cumulants),
            _ => None,
        };
        slug.or_else(|| Self::ALL.iter().copied().find(|k| k.name() == s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaCheck {
    pub kind: CheckKind,
    pub outcome: Outcome,
    pub value: f64,
    pub threshold: f64,
}

impl LemmaCheck {
    pub fn name(&self) -> &'static str {
        self.kind.name()
    }
}

/// Overrides for the chain parameters; `None` picks the default.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainOptions {
    /// Sector opening to assume instead of the measured `delta`.
    pub delta: Option<f64>,
    /// `gamma = gamma_frac * delta`.
    pub gamma_frac: f64,
    /// `tau = tau_frac * delta`.
    pub tau_frac: f64,
    pub s: f64,
    pub m: Option<f64>,
    /// Threshold between the two choices of `M`.
    pub delta0: f64,
    pub alpha: f64,
    /// Checks to evaluate; `None` runs all of them.
    pub checks: Option<Vec<CheckKind>>,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions {
            delta: None,
            gamma_frac: libm::exp2(-7.0),
            tau_frac: 0.999,
            s: 1e-3,
            m: None,
            delta0: 0.7,
            alpha: 0.25,
            checks: None,
        }
    }
}

impl ChainOptions {
    fn wants(&self, k: CheckKind) -> bool {
        self.checks.as_ref().is_none_or(|c| c.contains(&k))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub config: AnalysisConfig,
    pub delta: f64,
    pub r: f64,
    pub degree: usize,
    pub var: f64,
    pub phi_at_1: f64,
    pub h_value: f64,
    pub shapes: BoundShapes,
    /// `Var gamma^2 / phi_gamma(1)`.
    pub r1: f64,
    /// `phi_gamma(1) tau M^{2 pi/tau + s} / H`.
    pub r2: f64,
    /// `H / (n tau^2)`.
    pub r3: f64,
    /// `Var / basic`.
    pub end_ratio: f64,
    /// `Var / sharper`.
    pub end_ratio_sharper: f64,
    pub checks: Vec<LemmaCheck>,
    /// Truncation sub-checks merged over the roots; `value` is the smallest slack.
    pub truncation: Vec<SubCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|c| c.outcome.is_fail())
    }

    pub fn first_failure(&self) -> Option<&LemmaCheck> {
        self.checks.iter().find(|c| c.outcome.is_fail())
    }

    pub fn check(&self, kind: CheckKind) -> Option<&LemmaCheck> {
        self.checks.iter().find(|c| c.kind == kind)
    }
}

/// Resolve the chain parameters for a sector geometry.
pub fn chain_config(geom: &SectorGeometry, opts: &ChainOptions) -> Result<AnalysisConfig> {
    let delta = opts.delta.unwrap_or(geom.delta);
    if !(delta > 0.0 && delta <= PI) {
        return Err(Error::param("delta", "need 0 < delta <= pi"));
    }
    if delta > geom.delta + 1e-12 {
        return Err(Error::Hypothesis {
            stage: "sector hypothesis",
            detail: "a root lies inside the requested sector",
        });
    }
    if !(opts.tau_frac > 0.0 && opts.tau_frac < 1.0) {
        return Err(Error::param("tau_frac", "need 0 < tau_frac < 1"));
    }
    if !(opts.gamma_frac > 0.0 && opts.gamma_frac < 0.5 * opts.tau_frac) {
        return Err(Error::param("gamma_frac", "need 0 < gamma_frac < tau_frac/2"));
    }
    let gamma = opts.gamma_frac * delta;
    let tau = opts.tau_frac * delta;
    let r = geom.r;
    let m = match opts.m {
        Some(m) => m,
        None if delta <= opts.delta0 => (1.0 + delta) * r,
        None => r / opts.alpha,
    };
    if m < r {
        return Err(Error::Hypothesis { stage: "sector hypothesis", detail: "M must be at least R" });
    }
    let eps = (r - 1.0).clamp(0.0, 0.99).max(delta).min(0.5);
    let cfg = AnalysisConfig { gamma, tau, s: opts.s, eta: gamma / tau, eps, alpha: opts.alpha, m };
    cfg.validate()?;
    Ok(cfg)
}

const IDENTITY_TOL: f64 = 1e-6;

/// Run the three-stage chain on `a` and attach the lemma-level checks.
pub fn verify_chain(a: &AnalyzedPgf, opts: &ChainOptions) -> Result<VerificationReport> {
    if a.geometry.degree == 0 {
        return Err(Error::Degenerate);
    }
    let cfg = chain_config(&a.geometry, opts)?;
    let d = &a.dist;
    let var = d.variance();
    if !(var > 0.0) {
        return Err(Error::Degenerate);
    }
    let delta = opts.delta.unwrap_or(a.geometry.delta);
    let geom = SectorGeometry { delta, ..a.geometry };
    let n = geom.degree as f64;
    let (gamma, tau, s, m) = (cfg.gamma, cfg.tau, cfg.s, cfg.m);

    let phi = a.phi_gamma(Complex64::new(1.0, 0.0), gamma)?;
    let h = h_truncated_quadrature(a, m, tau, s)?;
    let shapes = bound_shapes(&geom);
    let r1 = var * gamma * gamma / phi;
    let r2 = libm::exp(libm::log(phi) + libm::log(tau) + (2.0 * PI / tau + s) * libm::log(m) - libm::log(h));
    let r3 = h / (n * tau * tau);

    let mut checks = Vec::new();
    let mut push = |kind: CheckKind, outcome: Outcome, value: f64, threshold: f64| {
        checks.push(LemmaCheck { kind, outcome, value, threshold });
    };
    let skip = |k: CheckKind| !opts.wants(k);

    push(CheckKind::Sector, Outcome::Pass, a.geometry.delta, delta);
    if !skip(CheckKind::PhiPositivity) {
        push(CheckKind::PhiPositivity, Outcome::from_bool(phi >= -1e-12), phi, -1e-12);
    }
    if !skip(CheckKind::HNonnegative) {
        push(CheckKind::HNonnegative, Outcome::from_bool(h >= -1e-12), h, -1e-12);
    }
    if !skip(CheckKind::WeakPositivity) || !skip(CheckKind::RotationalDecrease) {
        let pc = potential_property_checks(a, 17, 65)?;
        let as_num = |b: bool| if b { 1.0 } else { 0.0 };
        if !skip(CheckKind::WeakPositivity) {
            push(CheckKind::WeakPositivity, Outcome::from_bool(pc.weakly_positive), as_num(pc.weakly_positive), 1.0);
        }
        if !skip(CheckKind::RotationalDecrease) {
            let ok = pc.rotationally_decreasing;
            push(CheckKind::RotationalDecrease, Outcome::from_bool(ok), as_num(ok), 1.0);
        }
    }
    if !skip(CheckKind::RootSum) {
        let hs = h_truncated_rootsum(&a.roots, m, tau, s)?;
        let rel = (hs - h).abs() / h.abs().max(f64::MIN_POSITIVE);
        push(CheckKind::RootSum, Outcome::from_bool(rel <= IDENTITY_TOL), rel, IDENTITY_TOL);
    }
    if !skip(CheckKind::PoissonIdentity) {
        let id = phi_integral_identity_residual(a, 1.0, tau, gamma)?;
        push(CheckKind::PoissonIdentity, Outcome::from_bool(id.residual <= IDENTITY_TOL), id.residual, IDENTITY_TOL);
    }
    if !skip(CheckKind::KernelFloor) {
        let floor = kernel_floor(m, tau, cfg.eta, s)?;
        let ratio = floor / kernel_floor_shape(m, tau, s);
        push(CheckKind::KernelFloor, Outcome::from_bool(floor > 0.0), ratio, 0.0);
    }
    if !skip(CheckKind::Obrechkoff) {
        let ob = obrechkoff_check(&a.roots, delta);
        push(CheckKind::Obrechkoff, Outcome::from_bool(ob.ok), ob.count as f64, ob.bound);
    }
    let mut truncation = Vec::new();
    if !skip(CheckKind::Truncation) {
        truncation = truncation_over_roots(a, &cfg)?;
        let outcome = truncation.iter().fold(Outcome::Skipped, |acc, c| merge_outcome(acc, c.outcome));
        let slack = truncation.iter().map(|c| c.value).filter(|v| !v.is_nan()).fold(f64::NAN, f64::min);
        push(CheckKind::Truncation, outcome, slack, 0.0);
    }
    if !skip(CheckKind::Cumulants) {
        let c = normalized_cumulants(d, 2)?;
        let e1 = (c.get(1) - d.mean()).abs() / d.mean().abs().max(1.0);
        let e2 = (2.0 * c.get(2) - var).abs() / var.max(1.0);
        let err = e1.max(e2);
        push(CheckKind::Cumulants, Outcome::from_bool(e1 <= 1e-10 && e2 <= 1e-9), err, 1e-10);
    }

    Ok(VerificationReport {
        config: cfg,
        delta,
        r: geom.r,
        degree: geom.degree,
        var,
        phi_at_1: phi,
        h_value: h,
        shapes,
        r1,
        r2,
        r3,
        end_ratio: var / shapes.basic,
        end_ratio_sharper: var / shapes.sharper,
        checks,
        truncation,
    })
}

// Truncation sub-checks over every root class, merged by name: a sub-check
// fails if it fails for any root, passes if it passes for some root and is
// skipped otherwise.  `value` is the smallest slack seen.
fn truncation_over_roots(a: &AnalyzedPgf, cfg: &AnalysisConfig) -> Result<Vec<SubCheck>> {
    let mut merged: Vec<SubCheck> = Vec::new();
    for (z, _) in a.roots.conjugate_classes() {
        let rep = truncation_lemma_checks(z, cfg.tau, cfg.m, cfg.eps, cfg.s)?;
        for c in &rep.checks {
            // The unit-interval check is two-sided; its slack is the margin to 10%.
            let sl = match c.outcome {
                Outcome::Skipped => f64::NAN,
                _ if c.name == "unit-interval" => 0.1 * c.threshold - (c.value - c.threshold).abs(),
                _ => c.slack(),
            };
            let slot = match merged.iter_mut().find(|m| m.name == c.name) {
                Some(m) => m,
                None => {
                    merged.push(SubCheck { name: c.name, outcome: Outcome::Skipped, value: f64::NAN, threshold: 0.0 });
                    merged.last_mut().expect("just pushed")
                }
            };
            slot.outcome = merge_outcome(slot.outcome, c.outcome);
            if !sl.is_nan() {
                slot.value = if slot.value.is_nan() { sl } else { slot.value.min(sl) };
            }
        }
    }
    Ok(merged)
}

fn merge_outcome(a: Outcome, b: Outcome) -> Outcome {
    match (a, b) {
        (Outcome::Fail, _) | (_, Outcome::Fail) => Outcome::Fail,
        (Outcome::Pass, _) | (_, Outcome::Pass) => Outcome::Pass,
        _ => Outcome::Skipped,
    }
}

/// `(min end_ratio, min end_ratio_sharper)` over the reports.
pub fn empirical_constant(reports: &[VerificationReport]) -> Result<(f64, f64)> {
    if reports.is_empty() {
        return Err(Error::param("reports", "need at least one report"));
    }
    let basic = reports.iter().map(|r| r.end_ratio).fold(f64::INFINITY, f64::min);
    let sharper = reports.iter().map(|r| r.end_ratio_sharper).fold(f64::INFINITY, f64::min);
    Ok((basic, sharper))
}
