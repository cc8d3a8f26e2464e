//! Distributions on `{0, ..., n}`, their pgf, log potential and moments.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::special::normal_cdf;
use crate::sum::{two_prod, two_sum, NeumaierSum};
use crate::{Error, Result};

/// Probability vector `p_0..p_n` with `p_0 p_n > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

/// Mean, variance and raw moments `E X^m` for `m = 0..=max_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub raw: Vec<f64>,
}

impl Distribution {
    /// Normalize nonnegative weights.  Leading or trailing zeros are an
    /// error rather than being trimmed.
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { index });
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { index, value: w });
            }
        }
        let total = crate::sum::compensated_sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::ZeroSum);
        }
        if weights[0] == 0.0 {
            return Err(Error::ZeroEndpoint { index: 0 });
        }
        let n = weights.len() - 1;
        if weights[n] == 0.0 {
            return Err(Error::ZeroEndpoint { index: n });
        }
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        if probs[0] == 0.0 || probs[n] == 0.0 {
            return Err(Error::Underflow);
        }
        Ok(Distribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn degree(&self) -> usize {
        self.probs.len() - 1
    }

    /// Distribution of `n - X`.
    pub fn reversed(&self) -> Self {
        let mut probs = self.probs.clone();
        probs.reverse();
        Distribution { probs }
    }

    /// `f(z) = sum p_k z^k` by compensated Horner.
    pub fn pgf(&self, z: Complex64) -> Complex64 {
        horner_compensated(self.probs.iter().rev().copied(), z)
    }

    /// `u(z) = log|f(z)|`.  For `|z| > 1` the reversed polynomial is used so
    /// that high degrees never overflow.
    pub fn log_potential(&self, z: Complex64) -> Result<f64> {
        let r = z.norm();
        let (v, shift) = if r <= 1.0 {
            (self.pgf(z), 0.0)
        } else {
            let w = z.inv();
            let v = horner_compensated(self.probs.iter().copied(), w);
            (v, self.degree() as f64 * libm::log(r))
        };
        let m = v.norm();
        if m == 0.0 || !m.is_finite() {
            return Err(Error::ZeroOfPgf { re: z.re, im: z.im });
        }
        Ok(shift + libm::log(m))
    }

    /// `u(z) - u(e^{i gamma} z)`.
    pub fn phi_gamma(&self, z: Complex64, gamma: f64) -> Result<f64> {
        if gamma == 0.0 {
            return Ok(0.0);
        }
        let rotated = z * Complex64::from_polar(1.0, gamma);
        Ok(self.log_potential(z)? - self.log_potential(rotated)?)
    }

    pub fn moments(&self, max_order: usize) -> Moments {
        let order = max_order.max(2);
        let mut raw = Vec::with_capacity(order + 1);
        for m in 0..=order {
            let mut acc = NeumaierSum::new();
            for (i, &p) in self.probs.iter().enumerate() {
                let mut x = p;
                for _ in 0..m {
                    x *= i as f64;
                }
                acc.add(x);
            }
            raw.push(acc.value());
        }
        let mean = raw[1];
        let mut var = NeumaierSum::new();
        for (i, &p) in self.probs.iter().enumerate() {
            let d = i as f64 - mean;
            var.add(p * d * d);
        }
        Moments { mean, variance: var.value().max(0.0), raw }
    }

    pub fn mean(&self) -> f64 {
        crate::sum::compensated_sum(self.probs.iter().enumerate().map(|(i, p)| i as f64 * p))
    }

    pub fn variance(&self) -> f64 {
        self.moments(2).variance
    }

    pub fn mode_prob(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    /// `sup_t |P((X - mu)/sigma <= t) - Phi(t)|`, attained at a jump point
    /// either from the left or the right.
    pub fn kolmogorov_distance(&self) -> Result<f64> {
        let m = self.moments(2);
        if m.variance <= 0.0 {
            return Err(Error::Degenerate);
        }
        let sigma = libm::sqrt(m.variance);
        let mut cdf = NeumaierSum::new();
        let mut sup: f64 = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let phi = normal_cdf((i as f64 - m.mean) / sigma);
            let before = cdf.value();
            cdf.add(p);
            let after = cdf.value().min(1.0);
            sup = sup.max((before - phi).abs()).max((after - phi).abs());
        }
        Ok(sup)
    }
}

/// Alias of [`Distribution::new`].
pub fn make_distribution(weights: &[f64]) -> Result<Distribution> {
    Distribution::new(weights)
}

// Compensated Horner for real coefficients (highest first) at complex z.
fn horner_compensated(coeffs_high_first: impl Iterator<Item = f64>, z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let (mut re, mut im) = (0.0, 0.0);
    let (mut cre, mut cim) = (0.0, 0.0);
    for a in coeffs_high_first {
        // (re + i im)(x + i y) + a, tracking the rounding errors of every op
        let (p1, e1) = two_prod(re, x);
        let (p2, e2) = two_prod(im, y);
        let (p3, e3) = two_prod(re, y);
        let (p4, e4) = two_prod(im, x);
        let (r1, f1) = two_sum(p1, -p2);
        let (r2, f2) = two_sum(r1, a);
        let (i1, g1) = two_sum(p3, p4);
        let err_re = e1 - e2 + f1 + f2;
        let err_im = e3 + e4 + g1;
        let ncre = cre * x - cim * y + err_re;
        let ncim = cre * y + cim * x + err_im;
        re = r2;
        im = i1;
        cre = ncre;
        cim = ncim;
    }
    Complex64::new(re + cre, im + cim)
}

/// The analytic parameters manipulated by the verification chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisConfig {
    pub gamma: f64,
    pub tau: f64,
    pub s: f64,
    pub eta: f64,
    pub eps: f64,
    pub alpha: f64,
    pub m: f64,
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < self.tau && self.tau < PI) {
            return Err(Error::param("gamma/tau", "need 0 < gamma < tau < pi"));
        }
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(Error::param("s", "need 0 < s < 1"));
        }
        if !(self.eta > 0.0 && self.eta < 0.5) {
            return Err(Error::param("eta", "need 0 < eta < 1/2"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::param("eps", "need 0 < eps < 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::param("alpha", "need 0 < alpha < 1"));
        }
        if !(self.m >= 1.0 && self.m.is_finite()) {
            return Err(Error::param("M", "need M >= 1"));
        }
        Ok(())
    }
}
