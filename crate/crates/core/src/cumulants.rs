//! Normalized cumulants `a_j = kappa_j / j!`, the coefficients of
//! `u(e^w) = sum_j a_j Re(w^j)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::sum::NeumaierSum;
use crate::{Distribution, Error, Result};

pub const MAX_ORDER: usize = 60;

/// `a[0] = a_1, ..., a[J-1] = a_J`.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulantSeq {
    a: Vec<f64>,
}

impl CumulantSeq {
    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// `a_j` for `1 <= j <= J`.
    pub fn get(&self, j: usize) -> f64 {
        self.a[j - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }
}

/// Cumulants from exact central moments: with `c_j = E(X - mu)^j / j!`,
/// `log sum c_j w^j = sum l_j w^j` where
/// `l_j = c_j - (1/j) sum_{k<j} k l_k c_{j-k}`; then `a_1 = mu + l_1` and
/// `a_j = l_j` for `j >= 2`.
pub fn normalized_cumulants(d: &Distribution, order: usize) -> Result<CumulantSeq> {
    if !(2..=MAX_ORDER).contains(&order) {
        return Err(Error::param("J", "need 2 <= J <= 60"));
    }
    let mu = d.mean();
    let mut acc = vec![NeumaierSum::new(); order + 1];
    for (i, &p) in d.probs().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let x = i as f64 - mu;
        let mut term = p;
        acc[0].add(term);
        for (j, slot) in acc.iter_mut().enumerate().skip(1) {
            term *= x / j as f64;
            slot.add(term);
        }
    }
    let c: Vec<f64> = acc.iter().map(|s| s.value()).collect();
    let mut l = vec![0.0; order + 1];
    for j in 1..=order {
        let mut s = NeumaierSum::new();
        for k in 1..j {
            s.add(k as f64 * l[k] * c[j - k]);
        }
        l[j] = (c[j] - s.value() / j as f64) / c[0];
    }
    let mut a: Vec<f64> = l[1..].to_vec();
    a[0] += mu;
    Ok(CumulantSeq { a })
}

/// `phi_gamma(1) ~ -sum_{j>=2} a_j Re((i gamma)^j)`.  Odd terms vanish.
pub fn phi_via_cumulant_series(c: &CumulantSeq, gamma: f64) -> f64 {
    let mut acc = NeumaierSum::new();
    let g2 = gamma * gamma;
    let mut pow = 1.0;
    for j in 2..=c.order() {
        if j % 2 == 0 {
            pow *= -g2;
            acc.add(-c.get(j) * pow);
        }
    }
    acc.value()
}

/// `sum_{j>=L} |a_j| eps^j / sum_{j>=2} |a_j| eps^j`.
pub fn cumulant_decay_ratio(c: &CumulantSeq, eps: f64, l: usize) -> Result<f64> {
    if !(2..=c.order()).contains(&l) {
        return Err(Error::param("L", "need 2 <= L <= J"));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::param("eps", "need 0 < eps < 1/2"));
    }
    let mut num = NeumaierSum::new();
    let mut den = NeumaierSum::new();
    let mut pow = eps;
    for j in 2..=c.order() {
        pow *= eps;
        let t = c.get(j).abs() * pow;
        den.add(t);
        if j >= l {
            num.add(t);
        }
    }
    let den = den.value();
    if den <= 0.0 {
        return Err(Error::Degenerate);
    }
    Ok((num.value() / den).clamp(0.0, 1.0))
}

/// Largest `s_*` on a 64-point geometric grid over `[s 2^{-6(L+1)}, s]`
/// with `|a_2| >= s_*^{j-2} |a_j|` for every `2 <= j <= J`.
pub fn bes_witness(c: &CumulantSeq, s: f64, l: usize) -> Result<Option<f64>> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::param("s", "need s > 0"));
    }
    if l < 2 {
        return Err(Error::param("L", "need L >= 2"));
    }
    if c.order() < 2 || (2..=c.order()).all(|j| c.get(j) == 0.0) {
        return Err(Error::Degenerate);
    }
    let a2 = c.get(2).abs();
    if a2 == 0.0 {
        return Err(Error::Degenerate);
    }
    let lo = s * libm::exp2(-6.0 * (l as f64 + 1.0));
    let ratio = s / lo;
    for i in (0..64).rev() {
        let sx = if i == 63 { s } else { lo * libm::pow(ratio, i as f64 / 63.0) };
        let mut ok = true;
        let mut pow = 1.0;
        for j in 3..=c.order() {
            pow *= sx;
            if a2 < pow * c.get(j).abs() {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(sx));
        }
    }
    Ok(None)
}
