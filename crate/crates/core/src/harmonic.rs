//! Harmonic-measure tools on sectors: Poisson kernels, the boundary
//! representation of `phi_gamma`, the kernel floor, Brownian exit by
//! simulation and grid checks on the log potential.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::quad::{integrate_half_line, QuadConfig};
use crate::roots::AnalyzedPgf;
use crate::{Distribution, Error, Result};

/// `u(z) - u(e^{i gamma} z)`.
pub fn phi_gamma(d: &Distribution, z: Complex64, gamma: f64) -> Result<f64> {
    d.phi_gamma(z, gamma)
}

/// Poisson kernel of the upper half plane, `Im z / (pi |z - x|^2)`.
pub fn halfplane_kernel(z: Complex64, x: f64) -> Result<f64> {
    if !(z.im > 0.0) {
        return Err(Error::param("z", "need Im z > 0"));
    }
    let dx = z.re - x;
    Ok(z.im / (PI * (dx * dx + z.im * z.im)))
}

/// Boundary ray of the sector `0 < arg z < delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The positive real axis.
    Bottom,
    /// The ray `arg z = delta`.
    Top,
}

/// Poisson kernel of `S(0, delta)` at boundary point `t` (bottom) or
/// `t e^{i delta}` (top).
///
/// Evaluated through `log|z|` and `log t` so that large `g = pi/delta`
/// does not overflow.
pub fn sector_kernel(z: Complex64, delta: f64, t: f64, side: Side) -> Result<f64> {
    if !(delta > 0.0 && delta <= PI) {
        return Err(Error::param("delta", "need 0 < delta <= pi"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t", "need t > 0"));
    }
    let psi = z.arg();
    if !(psi > 0.0 && psi < delta && z.norm() > 0.0) {
        return Err(Error::param("z", "need 0 < arg z < delta"));
    }
    Ok(sector_kernel_raw(libm::log(z.norm()), psi, delta, t, side))
}

fn sector_kernel_raw(log_r: f64, psi: f64, delta: f64, t: f64, side: Side) -> f64 {
    let g = PI / delta;
    let half = 0.5 * g * (log_r - libm::log(t));
    let sh = libm::sinh(half);
    let w = 0.5 * g * psi;
    let ang = match side {
        Side::Bottom => libm::sin(w),
        Side::Top => libm::cos(w),
    };
    g * libm::sin(g * psi) / (PI * t * 4.0 * (sh * sh + ang * ang))
}

/// Both sides of the boundary representation of `phi_gamma` at
/// `z = rho e^{i(tau - gamma)/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// `phi_gamma(z)` against `\int_0^inf (u(t) - u(t e^{i tau})) P_{z, tau/2}(t) dt`.
pub fn phi_integral_identity_residual(a: &AnalyzedPgf, rho: f64, tau: f64, gamma: f64) -> Result<IdentityResidual> {
    if !(tau > 0.0 && tau < a.geometry.delta) {
        return Err(Error::Hypothesis { stage: "poisson identity", detail: "need 0 < tau < delta" });
    }
    if !(gamma > 0.0 && gamma < 0.5 * tau) {
        return Err(Error::Hypothesis { stage: "poisson identity", detail: "need 0 < gamma < tau/2" });
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::param("rho", "need rho > 0"));
    }
    let psi = 0.5 * (tau - gamma);
    let z = Complex64::from_polar(rho, psi);
    let lhs = a.phi_gamma(z, gamma)?;
    let rot = Complex64::from_polar(1.0, tau);
    let log_r = libm::log(rho);
    let half = 0.5 * tau;
    let f = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        let k = sector_kernel_raw(log_r, psi, half, t, Side::Bottom);
        if k == 0.0 {
            return 0.0;
        }
        match (a.log_potential(Complex64::new(t, 0.0)), a.log_potential(rot * t)) {
            (Ok(x), Ok(y)) => (x - y) * k,
            _ => f64::NAN,
        }
    };
    let mut breaks: Vec<f64> = Vec::new();
    breaks.push(rho);
    for (zeta, _) in a.roots.conjugate_classes() {
        breaks.push(zeta.norm());
    }
    let rhs = integrate_half_line(f, &breaks, &QuadConfig::default())?.value;
    let residual = (lhs - rhs).abs() / lhs.abs().max(1e-12);
    Ok(IdentityResidual { lhs, rhs, residual })
}

const FLOOR_T_POINTS: usize = 2048;
const FLOOR_RHO_POINTS: usize = 65;

/// `min t^{1+s} P_{z(rho), tau/2}(t)` over `t in [1/M, M]` and
/// `rho in [e^{-tau}, e^{tau}]`, with `z(rho) = rho e^{i(tau - gamma)/2}` and
/// `gamma = eta tau`.
pub fn kernel_floor(m: f64, tau: f64, eta: f64, s: f64) -> Result<f64> {
    if !(m >= 1.0 && m.is_finite()) {
        return Err(Error::param("M", "need M >= 1"));
    }
    if !(tau > 0.0 && tau < PI) {
        return Err(Error::param("tau", "need 0 < tau < pi"));
    }
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::param("eta", "need 0 < eta < 1/2"));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::param("s", "need 0 < s < 1"));
    }
    let psi = 0.5 * (tau - eta * tau);
    let half = 0.5 * tau;
    let lm = libm::log(m);
    let mut best = f64::INFINITY;
    for i in 0..FLOOR_RHO_POINTS {
        let log_r = -tau + 2.0 * tau * i as f64 / (FLOOR_RHO_POINTS - 1) as f64;
        // In x = log t the objective is smooth and unimodal between grid points.
        let obj = |x: f64| {
            let t = libm::exp(x);
            libm::pow(t, 1.0 + s) * sector_kernel_raw(log_r, psi, half, t, Side::Bottom)
        };
        if m == 1.0 {
            best = best.min(obj(0.0));
            continue;
        }
        let h = 2.0 * lm / (FLOOR_T_POINTS - 1) as f64;
        let mut arg_min = 0;
        let mut v_min = f64::INFINITY;
        for j in 0..FLOOR_T_POINTS {
            let v = obj(-lm + h * j as f64);
            if v < v_min {
                v_min = v;
                arg_min = j;
            }
        }
        let lo = -lm + h * arg_min.saturating_sub(1) as f64;
        let hi = (-lm + h * (arg_min + 1) as f64).min(lm);
        best = best.min(v_min).min(golden_min(obj, lo, hi));
    }
    Ok(best)
}

/// `tau^{-1} M^{-2 pi/tau - s}`, the shape the kernel floor is compared with.
pub fn kernel_floor_shape(m: f64, tau: f64, s: f64) -> f64 {
    libm::pow(m, -2.0 * PI / tau - s) / tau
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    fc.min(fd).min(f(a)).min(f(b))
}

/// `{rho e^{i theta} : rho_min <= rho <= rho_max, theta_min <= theta <= theta_max}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarRectangle {
    pub rho_min: f64,
    pub rho_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

/// A side of a polar rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RectSide {
    RhoMin,
    RhoMax,
    ThetaMin,
    ThetaMax,
}

impl PolarRectangle {
    pub fn new(rho_min: f64, rho_max: f64, theta_min: f64, theta_max: f64) -> Result<Self> {
        if !(rho_min > 0.0 && rho_min < rho_max && rho_max.is_finite()) {
            return Err(Error::param("rho", "need 0 < rho_min < rho_max"));
        }
        if !(theta_min < theta_max && theta_max - theta_min < PI && theta_min > -PI && theta_max < PI) {
            return Err(Error::param("theta", "need theta_min < theta_max within an open half turn"));
        }
        Ok(PolarRectangle { rho_min, rho_max, theta_min, theta_max })
    }

    /// The rectangle around 1 used for the exit estimate:
    /// `rho in [e^{-delta}, e^{delta}]`, `theta in [-gamma/2, (delta - gamma)/2]`, `gamma = eta delta`.
    pub fn exit_domain(delta: f64, eta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= PI) {
            return Err(Error::param("delta", "need 0 < delta <= pi"));
        }
        if !(eta > 0.0 && eta < 0.5) {
            return Err(Error::param("eta", "need 0 < eta < 1/2"));
        }
        let gamma = eta * delta;
        Self::new(libm::exp(-delta), libm::exp(delta), -0.5 * gamma, 0.5 * (delta - gamma))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        let th = z.arg();
        r >= self.rho_min && r <= self.rho_max && th >= self.theta_min && th <= self.theta_max
    }

    /// Diagonal of the bounding box.
    pub fn diameter(&self) -> f64 {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        let mut add = |z: Complex64| {
            x0 = x0.min(z.re);
            x1 = x1.max(z.re);
            y0 = y0.min(z.im);
            y1 = y1.max(z.im);
        };
        for r in [self.rho_min, self.rho_max] {
            for th in [self.theta_min, self.theta_max] {
                add(Complex64::from_polar(r, th));
            }
            // Extreme points of the arcs.
            for th in [0.0, 0.5 * PI, -0.5 * PI] {
                if th > self.theta_min && th < self.theta_max {
                    add(Complex64::from_polar(r, th));
                }
            }
        }
        libm::hypot(x1 - x0, y1 - y0)
    }

    /// `1e-4 * diameter^2`.
    pub fn default_step(&self) -> f64 {
        let d = self.diameter();
        1e-4 * d * d
    }

    // First side crossed by the segment a -> b, with a inside.
    fn first_exit(&self, a: Complex64, b: Complex64) -> RectSide {
        let v = b - a;
        let mut best = (f64::INFINITY, None);
        for (side, th) in [(RectSide::ThetaMin, self.theta_min), (RectSide::ThetaMax, self.theta_max)] {
            let dir = Complex64::from_polar(1.0, th);
            let cross = |p: Complex64| dir.re * p.im - dir.im * p.re;
            let den = cross(v);
            if den != 0.0 {
                let lam = -cross(a) / den;
                if (0.0..=1.0).contains(&lam) && lam < best.0 {
                    let p = a + v * lam;
                    if p.re * dir.re + p.im * dir.im > 0.0 {
                        best = (lam, Some(side));
                    }
                }
            }
        }
        let vv = v.norm_sqr();
        let av = a.re * v.re + a.im * v.im;
        let aa = a.norm_sqr();
        for (side, r) in [(RectSide::RhoMin, self.rho_min), (RectSide::RhoMax, self.rho_max)] {
            let disc = av * av - vv * (aa - r * r);
            if vv > 0.0 && disc >= 0.0 {
                let sq = libm::sqrt(disc);
                for lam in [(-av - sq) / vv, (-av + sq) / vv] {
                    if (0.0..=1.0).contains(&lam) && lam < best.0 {
                        best = (lam, Some(side));
                    }
                }
            }
        }
        match best.1 {
            Some(side) => side,
            None => self.violated_side(b),
        }
    }

    fn violated_side(&self, b: Complex64) -> RectSide {
        let r = b.norm();
        let th = b.arg();
        let excess = [
            (RectSide::RhoMin, libm::log(self.rho_min / r)),
            (RectSide::RhoMax, libm::log(r / self.rho_max)),
            (RectSide::ThetaMin, self.theta_min - th),
            (RectSide::ThetaMax, th - self.theta_max),
        ];
        let mut out = excess[0];
        for e in excess {
            if e.1 > out.1 {
                out = e;
            }
        }
        out.0
    }
}

/// Fraction of simulated walks leaving through a target side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub walks: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_counts(hits: u64, walks: u64, seed: u64) -> Self {
        let p_hat = if walks == 0 { 0.0 } else { hits as f64 / walks as f64 };
        let stderr = if walks == 0 { 0.0 } else { libm::sqrt(p_hat * (1.0 - p_hat) / walks as f64) };
        McEstimate { p_hat, stderr, walks, seed }
    }
}

/// Walks per independently seeded block.
pub const BLOCK_WALKS: u64 = 1024;

/// Everything that defines an exit experiment except the walk count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExitProblem {
    pub domain: PolarRectangle,
    pub start: Complex64,
    pub target: RectSide,
    pub step: f64,
    pub seed: u64,
}

const MAX_STEPS: u64 = 100_000_000;

impl ExitProblem {
    pub fn new(domain: PolarRectangle, start: Complex64, target: RectSide, step: f64, seed: u64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::param("step", "need step > 0"));
        }
        if !domain.contains(start) {
            return Err(Error::param("start", "start point outside the domain"));
        }
        Ok(ExitProblem { domain, start, target, step, seed })
    }

    pub fn blocks(walks: u64) -> u64 {
        walks.div_ceil(BLOCK_WALKS)
    }

    /// Hits among the walks of block `block` out of `walks` in total.
    /// Block `b` uses the ChaCha8 stream `b` of `seed`, so any partition of
    /// blocks across workers gives the same total.
    pub fn run_block(&self, block: u64, walks: u64) -> u64 {
        let first = block * BLOCK_WALKS;
        if first >= walks {
            return 0;
        }
        let count = (walks - first).min(BLOCK_WALKS);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(block);
        let sd = libm::sqrt(self.step);
        let mut hits = 0;
        for _ in 0..count {
            let mut p = self.start;
            let mut exit = None;
            for _ in 0..MAX_STEPS {
                let dx: f64 = StandardNormal.sample(&mut rng);
                let dy: f64 = StandardNormal.sample(&mut rng);
                let q = p + Complex64::new(sd * dx, sd * dy);
                if !self.domain.contains(q) {
                    exit = Some(self.domain.first_exit(p, q));
                    break;
                }
                p = q;
            }
            if exit == Some(self.target) {
                hits += 1;
            }
        }
        hits
    }

    pub fn run(&self, walks: u64) -> McEstimate {
        let hits = (0..Self::blocks(walks)).map(|b| self.run_block(b, walks)).sum();
        McEstimate::from_counts(hits, walks, self.seed)
    }
}

/// Probability that Brownian motion from 1 leaves the exit domain of
/// `(delta, eta)` through the side `theta = (delta - gamma)/2`.
pub fn brownian_exit_estimate(delta: f64, eta: f64, walks: u64, step: f64, seed: u64) -> Result<McEstimate> {
    if walks == 0 {
        return Err(Error::param("walks", "need walks >= 1"));
    }
    let domain = PolarRectangle::exit_domain(delta, eta)?;
    let p = ExitProblem::new(domain, Complex64::new(1.0, 0.0), RectSide::ThetaMax, step, seed)?;
    Ok(p.run(walks))
}

/// Exit through the far arc of the truncated sector
/// `{1e-3 <= |z| <= ratio, 0 <= arg z <= delta}` starting from `e^{i delta/2}`.
pub fn arc_exit_problem(delta: f64, ratio: f64, step: Option<f64>, seed: u64) -> Result<ExitProblem> {
    if !(ratio > 1.0) {
        return Err(Error::param("ratio", "need ratio > 1"));
    }
    if !(delta > 0.0 && delta < PI) {
        return Err(Error::param("delta", "need 0 < delta < pi"));
    }
    let domain = PolarRectangle::new(1e-3, ratio, 0.0, delta)?;
    let step = step.unwrap_or_else(|| domain.default_step());
    ExitProblem::new(domain, Complex64::from_polar(1.0, 0.5 * delta), RectSide::RhoMax, step, seed)
}

pub fn arc_exit_estimate(delta: f64, ratio: f64, walks: u64, step: Option<f64>, seed: u64) -> Result<McEstimate> {
    if walks == 0 {
        return Err(Error::param("walks", "need walks >= 1"));
    }
    Ok(arc_exit_problem(delta, ratio, step, seed)?.run(walks))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PotentialChecks {
    pub weakly_positive: bool,
    pub rotationally_decreasing: bool,
}

const GRID_SLACK: f64 = 1e-10;

/// Grid checks of `u(|z|) >= u(z)` on `rho in [1/(2R), 2R]`, `theta in [-pi, pi]`,
/// and of `theta -> u(rho e^{i theta})` being nonincreasing on `[0, delta/2]`.
/// The slack is `1e-10 max(1, |u|)`.  Grid points on a root are skipped.
pub fn potential_property_checks(a: &AnalyzedPgf, n_rho: usize, n_theta: usize) -> Result<PotentialChecks> {
    if n_rho < 1 || n_theta < 2 {
        return Err(Error::param("grid", "need n_rho >= 1 and n_theta >= 2"));
    }
    if !(a.geometry.delta > 0.0) {
        return Err(Error::Hypothesis { stage: "potential checks", detail: "need delta > 0" });
    }
    let d = a;
    let lr = libm::log(2.0 * a.geometry.r);
    let half = 0.5 * a.geometry.delta;
    let mut weak = true;
    let mut rot = true;
    for i in 0..n_rho {
        let x = if n_rho == 1 { 0.0 } else { -lr + 2.0 * lr * i as f64 / (n_rho - 1) as f64 };
        let rho = libm::exp(x);
        let u_abs = d.log_potential(Complex64::new(rho, 0.0))?;
        let tol = GRID_SLACK * u_abs.abs().max(1.0);
        for j in 0..n_theta {
            let th = -PI + 2.0 * PI * j as f64 / (n_theta - 1) as f64;
            if let Ok(u) = d.log_potential(Complex64::from_polar(rho, th)) {
                if u > u_abs + tol {
                    weak = false;
                }
            }
        }
        let mut prev = u_abs;
        for j in 1..n_theta {
            let th = half * j as f64 / (n_theta - 1) as f64;
            let u = d.log_potential(Complex64::from_polar(rho, th))?;
            if u > prev + GRID_SLACK * prev.abs().max(1.0) {
                rot = false;
            }
            prev = u;
        }
    }
    Ok(PotentialChecks { weakly_positive: weak, rotationally_decreasing: rot })
}
