//! Test distributions: the extremal lattice family, binomials, and random
//! distributions with prescribed root region.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Uniform};

use crate::roots::{normalized_coefficients, AnalyzedPgf, RootSet};
use crate::{Distribution, Error, Result};

/// `X = k * Bin(n/k, p)` with `p = 1/(1 + R^k)`: all roots have modulus
/// `R` and argument an odd multiple of `pi/k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SharpnessParams {
    k: usize,
    r: f64,
    n: usize,
}

impl SharpnessParams {
    pub fn new(k: usize, r: f64, n: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::param("k", "need k >= 3"));
        }
        if n == 0 || !n.is_multiple_of(k) {
            return Err(Error::param("n", "need a positive multiple of k"));
        }
        if !(r >= 1.0 && r.is_finite()) {
            return Err(Error::param("R", "need R >= 1"));
        }
        Ok(SharpnessParams { k, r, n })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        1.0 / (1.0 + libm::pow(self.r, self.k as f64))
    }

    /// `Var X = k^2 (n/k) p (1-p)`.
    pub fn variance(&self) -> f64 {
        let p = self.p();
        (self.k * self.n) as f64 * p * (1.0 - p)
    }
}

pub fn sharpness_family(params: &SharpnessParams) -> Result<Distribution> {
    let m = params.n / params.k;
    let pmf = binomial_pmf(m, params.p())?;
    let mut w = alloc::vec![0.0; params.n + 1];
    for (j, x) in pmf.into_iter().enumerate() {
        w[j * params.k] = x;
    }
    Distribution::new(&w)
}

/// Exact roots: the k-th roots of `-(1-p)/p = -R^k`, each `n/k` times.
pub fn sharpness_roots(params: &SharpnessParams) -> Result<RootSet> {
    let k = params.k;
    let mut roots = Vec::with_capacity(params.n);
    for l in 0..k {
        let z = Complex64::from_polar(params.r, PI * (2 * l + 1) as f64 / k as f64);
        for _ in 0..params.n / k {
            roots.push(z);
        }
    }
    RootSet::from_roots(&roots)
}

pub fn sharpness(params: &SharpnessParams) -> Result<AnalyzedPgf> {
    Ok(AnalyzedPgf::with_roots(sharpness_family(params)?, sharpness_roots(params)?))
}

pub fn binomial_dist(n: usize, p: f64) -> Result<Distribution> {
    if n == 0 {
        return Err(Error::param("n", "need n >= 1"));
    }
    Distribution::new(&binomial_pmf(n, p)?)
}

/// Binomial with its exact roots (all at `-(1-p)/p`).
pub fn binomial(n: usize, p: f64) -> Result<AnalyzedPgf> {
    let d = binomial_dist(n, p)?;
    let roots = alloc::vec![Complex64::new(-(1.0 - p) / p, 0.0); n];
    Ok(AnalyzedPgf::with_roots(d, RootSet::from_roots(&roots)?))
}

fn binomial_pmf(m: usize, p: f64) -> Result<Vec<f64>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param("p", "need 0 < p < 1"));
    }
    let (lp, lq) = (libm::log(p), libm::log1p(-p));
    let lf = |x: usize| libm::lgamma(x as f64 + 1.0);
    let out: Vec<f64> =
        (0..=m).map(|j| libm::exp(lf(m) - lf(j) - lf(m - j) + j as f64 * lp + (m - j) as f64 * lq)).collect();
    if out[0] == 0.0 || out[m] == 0.0 {
        return Err(Error::Underflow);
    }
    Ok(out)
}

/// Conjugate-closed roots with `|arg| >= delta_min` and
/// `1/R_max <= |zeta| <= R_max`: arguments uniform on `[delta_min, pi]`,
/// log-moduli uniform on `[-ln R_max, ln R_max]`, and one root on the
/// negative axis when the degree is odd.
pub fn random_roots(degree: usize, delta_min: f64, r_max: f64, rng: &mut ChaCha8Rng) -> Result<Vec<Complex64>> {
    if degree == 0 {
        return Err(Error::param("degree", "need degree >= 1"));
    }
    if !(delta_min > 0.0 && delta_min <= PI) {
        return Err(Error::param("delta_min", "need 0 < delta_min <= pi"));
    }
    if !(r_max >= 1.0 && r_max.is_finite()) {
        return Err(Error::param("R_max", "need R_max >= 1"));
    }
    let lr = libm::log(r_max);
    let arg = Uniform::new_inclusive(delta_min, PI).map_err(|_| Error::param("delta_min", "empty range"))?;
    let logmod = Uniform::new_inclusive(-lr, lr).map_err(|_| Error::param("R_max", "empty range"))?;
    let mut roots = Vec::with_capacity(degree);
    for _ in 0..degree / 2 {
        let theta = arg.sample(rng);
        let rho = libm::exp(logmod.sample(rng));
        if theta >= PI {
            roots.push(Complex64::new(-rho, 0.0));
            roots.push(Complex64::new(-rho, 0.0));
        } else {
            let z = Complex64::from_polar(rho, theta);
            roots.push(z);
            roots.push(z.conj());
        }
    }
    if degree % 2 == 1 {
        roots.push(Complex64::new(-libm::exp(logmod.sample(rng)), 0.0));
    }
    Ok(roots)
}

const MAX_ATTEMPTS: usize = 1000;

/// Rejection-sample root sets until every coefficient is nonnegative.
/// The returned roots are the sampled ones, so the geometry is exact.
pub fn random_root_pgf(degree: usize, delta_min: f64, r_max: f64, seed: u64) -> Result<AnalyzedPgf> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let roots = random_roots(degree, delta_min, r_max, &mut rng)?;
        let coeffs = normalized_coefficients(&roots)?;
        if coeffs.iter().all(|&x| x >= 0.0) {
            let dist = Distribution::new(&coeffs)?;
            return Ok(AnalyzedPgf::with_roots(dist, RootSet::from_roots(&roots)?));
        }
    }
    Err(Error::RejectionCap { attempts: MAX_ATTEMPTS })
}

pub fn random_root_dist(degree: usize, delta_min: f64, r_max: f64, seed: u64) -> Result<Distribution> {
    Ok(random_root_pgf(degree, delta_min, r_max, seed)?.dist)
}
