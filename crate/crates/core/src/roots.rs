//! Roots of the pgf, the sector geometry `(delta, R)` they determine, and
//! the root expansion of the log potential.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::dist::Distribution;
use crate::sum::NeumaierSum;
use crate::{Error, Result};

const MAX_ITER: usize = 500;
const PAIR_TOL: f64 = 1e-9;
const CLOSE_PAIR: f64 = 1e-6;
const MERGE_TOL: f64 = 1e-10;

/// Diagnostics attached to a root set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCondition {
    /// Smallest distance between two roots (0 for merged multiple roots).
    pub min_separation: f64,
    /// Some pair of roots lies within 1e-6 of each other.
    pub close_pair: bool,
    /// Largest relative mismatch found while pairing conjugates.
    pub pairing_residual: f64,
    /// Relative coefficient error `|p_n prod(z - zeta) - p|_1 / |p|_1`.
    pub backward_error: f64,
    /// Number of clusters collapsed to a multiple root.
    pub merged_clusters: usize,
}

/// Multiset of pgf roots, closed under conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    roots: Vec<Complex64>,
    n_inside: usize,
    c_x: f64,
    condition: RootCondition,
}

/// `c_X` in `u(z) = N log|z| + sum_in log|1 - zeta/z| + sum_out log|1 - z/zeta| + c_X`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialExpansion {
    pub c_x: f64,
}

/// `delta = min |arg zeta|`, `R = max max(|zeta|, 1/|zeta|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorGeometry {
    pub delta: f64,
    pub r: f64,
    pub degree: usize,
}

impl RootSet {
    /// Build from an explicit multiset.  Conjugate pairs are matched with
    /// relative tolerance 1e-9 and symmetrized.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        for z in roots {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::param("roots", "non-finite root"));
            }
            if z.norm() == 0.0 {
                return Err(Error::RootAtZero);
            }
        }
        let (paired, residual) = pair_conjugates(roots)?;
        if residual > PAIR_TOL {
            return Err(Error::NotConjugateClosed);
        }
        Ok(Self::assemble(paired, residual, 0.0, 0))
    }

    fn assemble(mut roots: Vec<Complex64>, pairing_residual: f64, backward_error: f64, merged: usize) -> Self {
        roots.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
        let n_inside = roots.iter().filter(|z| z.norm() < 1.0).count();
        let mut c = NeumaierSum::new();
        for z in &roots {
            let t = if z.norm() < 1.0 { Complex64::new(1.0, 0.0) - z } else { Complex64::new(1.0, 0.0) - z.inv() };
            c.add(-libm::log(t.norm()));
        }
        let mut min_sep = f64::INFINITY;
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                min_sep = min_sep.min((roots[i] - roots[j]).norm());
            }
        }
        let condition = RootCondition {
            min_separation: min_sep,
            close_pair: min_sep < CLOSE_PAIR,
            pairing_residual,
            backward_error,
            merged_clusters: merged,
        };
        RootSet { roots, n_inside, c_x: c.value(), condition }
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Number of roots with `|zeta| < 1`.
    pub fn n_inside(&self) -> usize {
        self.n_inside
    }

    pub fn condition(&self) -> &RootCondition {
        &self.condition
    }

    pub fn expansion(&self) -> PotentialExpansion {
        PotentialExpansion { c_x: self.c_x }
    }

    pub fn conjugated(&self) -> RootSet {
        let roots: Vec<Complex64> = self.roots.iter().map(|z| z.conj()).collect();
        Self::assemble(
            roots,
            self.condition.pairing_residual,
            self.condition.backward_error,
            self.condition.merged_clusters,
        )
    }

    /// `Var X = -sum zeta / (1 - zeta)^2`, from `(log f)'' + (log f)'` at 1.
    pub fn variance(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for z in &self.roots {
            let d = Complex64::new(1.0, 0.0) - z;
            acc.add(-(z / (d * d)).re);
        }
        acc.value()
    }

    /// Mean from the roots: `sum 1/(1 - zeta)`.
    pub fn mean(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for z in &self.roots {
            acc.add((Complex64::new(1.0, 0.0) - z).inv().re);
        }
        acc.value()
    }

    /// Roots grouped by value: `(root, multiplicity)` with each conjugate
    /// pair reported once as the upper-half-plane member with doubled count.
    pub fn conjugate_classes(&self) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for z in &self.roots {
            let key = Complex64::new(z.re, z.im.abs());
            match out.iter_mut().find(|(w, _)| w.re.to_bits() == key.re.to_bits() && w.im.to_bits() == key.im.to_bits())
            {
                Some((_, m)) => *m += 1,
                None => out.push((key, 1)),
            }
        }
        out
    }
}

/// Roots of the pgf of `d`.
///
/// Eigenvalues of the balanced companion matrix of `h(w)`, where
/// `f(z) = h(z^g)` for the lattice span `g` of the support, followed by
/// Newton polishing.
/// Clusters left by multiple roots are collapsed to a single multiple root
/// when that keeps the backward error at rounding level.
pub fn find_roots(d: &Distribution) -> Result<RootSet> {
    let p = d.probs();
    let n = d.degree();
    if n == 0 {
        return Err(Error::param("distribution", "degree must be at least 1"));
    }
    let g = p.iter().enumerate().filter(|(_, &x)| x != 0.0).fold(0usize, |acc, (i, _)| gcd(acc, i));
    let h: Vec<f64> = p.iter().step_by(g).copied().collect();
    let m = h.len() - 1;

    let raw = companion_roots(&h)?;
    let e0 = backward_error(&h, &raw);
    let (mut reduced, merged) = merge_clusters(&h, raw, e0);
    polish(&h, &mut reduced);
    let be = backward_error(&h, &reduced);
    let (reduced, res0) = pair_conjugates(&reduced)?;

    let mut roots = Vec::with_capacity(n);
    for w in &reduced {
        if g == 1 {
            roots.push(*w);
            continue;
        }
        let r = libm::pow(w.norm(), 1.0 / g as f64);
        let phi = w.arg();
        for l in 0..g {
            roots.push(Complex64::from_polar(r, (phi + 2.0 * PI * l as f64) / g as f64));
        }
    }
    debug_assert_eq!(roots.len(), m * g);
    let (roots, res1) = pair_conjugates(&roots)?;
    Ok(RootSet::assemble(roots, res0.max(res1), be, merged))
}

pub fn sector_geometry(rs: &RootSet) -> SectorGeometry {
    let mut delta = PI;
    let mut r: f64 = 1.0;
    for z in rs.roots() {
        delta = delta.min(z.arg().abs());
        let m = z.norm();
        r = r.max(m).max(1.0 / m);
    }
    SectorGeometry { delta, r, degree: rs.degree() }
}

/// Distribution whose pgf has exactly the given roots.
pub fn dist_from_roots(roots: &[Complex64]) -> Result<Distribution> {
    if roots.is_empty() {
        return Distribution::new(&[1.0]);
    }
    for z in roots {
        if (z - Complex64::new(1.0, 0.0)).norm() <= 1e-12 {
            return Err(Error::RootAtOne);
        }
    }
    let mut probs = normalized_coefficients(roots)?;
    for (index, x) in probs.iter_mut().enumerate() {
        if *x < -1e-9 {
            return Err(Error::NegativeCoefficient { index, value: *x });
        }
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    Distribution::new(&probs)
}

// Coefficients of prod (z - zeta), made real by multiplying conjugate
// pairs as real quadratics, scaled to sum to one.  No sign clamping.
pub fn normalized_coefficients(roots: &[Complex64]) -> Result<Vec<f64>> {
    let rs = RootSet::from_roots(roots)?;
    let zs = rs.roots();
    let mut c: Vec<f64> = vec![1.0];
    let mut used = vec![false; zs.len()];
    for i in 0..zs.len() {
        if used[i] {
            continue;
        }
        let z = zs[i];
        used[i] = true;
        if z.im == 0.0 {
            c = mul_poly(&c, &[-z.re, 1.0]);
        } else {
            let j = (0..zs.len())
                .find(|&j| !used[j] && zs[j].re.to_bits() == z.re.to_bits() && zs[j].im.to_bits() == (-z.im).to_bits())
                .ok_or(Error::NotConjugateClosed)?;
            used[j] = true;
            c = mul_poly(&c, &[z.norm_sqr(), -2.0 * z.re, 1.0]);
        }
    }
    let total = crate::sum::compensated_sum(c.iter().copied());
    if total == 0.0 || !total.is_finite() {
        return Err(Error::Underflow);
    }
    Ok(c.iter().map(|x| x / total).collect())
}

/// `u(z)` from the root expansion.
pub fn potential_from_roots(rs: &RootSet, z: Complex64) -> Result<f64> {
    let r = z.norm();
    if r == 0.0 {
        return Err(Error::ZeroOfPgf { re: z.re, im: z.im });
    }
    let one = Complex64::new(1.0, 0.0);
    let mut acc = NeumaierSum::new();
    acc.add(rs.n_inside() as f64 * libm::log(r));
    for zeta in rs.roots() {
        let t = if zeta.norm() < 1.0 { one - zeta / z } else { one - z / zeta };
        let m = t.norm();
        if m == 0.0 {
            return Err(Error::ZeroOfPgf { re: z.re, im: z.im });
        }
        acc.add(libm::log(m));
    }
    acc.add(rs.c_x);
    Ok(acc.value())
}

/// Root count in the sector `|arg| <= alpha` against the bound `(2 alpha/pi) deg`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObrechkoffCount {
    pub count: usize,
    pub bound: f64,
    pub ok: bool,
}

pub fn obrechkoff_check(rs: &RootSet, alpha: f64) -> ObrechkoffCount {
    let count = rs.roots().iter().filter(|z| z.arg().abs() <= alpha + 1e-9).count();
    let bound = 2.0 * alpha / PI * rs.degree() as f64;
    ObrechkoffCount { count, bound, ok: count as f64 <= bound + 1e-9 * bound.max(1.0) }
}

/// A distribution together with its roots and their geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzedPgf {
    pub dist: Distribution,
    pub roots: RootSet,
    pub geometry: SectorGeometry,
}

impl AnalyzedPgf {
    pub fn from_distribution(dist: Distribution) -> Result<Self> {
        let roots = find_roots(&dist)?;
        let geometry = sector_geometry(&roots);
        Ok(AnalyzedPgf { dist, roots, geometry })
    }

    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        let dist = dist_from_roots(roots)?;
        let roots = RootSet::from_roots(roots)?;
        let geometry = sector_geometry(&roots);
        Ok(AnalyzedPgf { dist, roots, geometry })
    }

    /// Pair a distribution with roots known in closed form.
    pub fn with_roots(dist: Distribution, roots: RootSet) -> Self {
        let geometry = sector_geometry(&roots);
        AnalyzedPgf { dist, roots, geometry }
    }

    /// `u(z)` from the root expansion.  Unlike [`Distribution::log_potential`]
    /// this stays accurate near clusters of roots of a high-degree pgf, where
    /// Horner's rule loses all digits to cancellation.
    pub fn log_potential(&self, z: Complex64) -> Result<f64> {
        potential_from_roots(&self.roots, z)
    }

    /// `u(z) - u(e^{i gamma} z)` from the root expansion.
    pub fn phi_gamma(&self, z: Complex64, gamma: f64) -> Result<f64> {
        if gamma == 0.0 {
            return Ok(0.0);
        }
        Ok(self.log_potential(z)? - self.log_potential(z * Complex64::from_polar(1.0, gamma))?)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mul_poly(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

// Newton correction f/f' at z, and whether |f(z)| is at rounding level.
fn newton_ratio(a: &[f64], z: Complex64) -> (Complex64, bool) {
    let m = a.len() - 1;
    let r = z.norm();
    let (val, bound, ratio) = if r <= 1.0 {
        let mut p = Complex64::new(a[m], 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut b = a[m].abs();
        for k in (0..m).rev() {
            dp = dp * z + p;
            p = p * z + a[k];
            b = b * r + a[k].abs();
        }
        (p, b, p / dp)
    } else {
        let w = z.inv();
        let rw = 1.0 / r;
        let mut q = Complex64::new(a[0], 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        let mut b = a[0].abs();
        for &ak in &a[1..] {
            dq = dq * w + q;
            q = q * w + ak;
            b = b * rw + ak.abs();
        }
        // f'/f = w (m - w q'/q)
        (q, b, q / (w * (q * m as f64 - w * dq)))
    };
    let small = val.norm() <= 4.0 * (m as f64 + 1.0) * f64::EPSILON * bound;
    (ratio, small)
}

// Eigenvalues of the balanced companion matrix of a (ascending, a[m] != 0)
// by the real double-shift Hessenberg QR iteration.  Complex eigenvalues
// come out as exact conjugate pairs.
fn companion_roots(a: &[f64]) -> Result<Vec<Complex64>> {
    let n = a.len() - 1;
    if n == 1 {
        return Ok(vec![Complex64::new(-a[0] / a[1], 0.0)]);
    }
    let mut h = vec![vec![0.0; n]; n];
    for j in 0..n {
        h[0][j] = -a[n - 1 - j] / a[n];
    }
    for i in 1..n {
        h[i][i - 1] = 1.0;
    }
    balance(&mut h);
    hqr(&mut h)
}

fn balance(a: &mut [Vec<f64>]) {
    const RADIX: f64 = 2.0;
    let n = a.len();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let s = c + r;
                let mut f = 1.0;
                let mut g = r / RADIX;
                while c < g {
                    f *= RADIX;
                    c *= RADIX * RADIX;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= RADIX * RADIX;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[i][j] *= g;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

#[allow(clippy::many_single_char_names)]
fn hqr(a: &mut [Vec<f64>]) -> Result<Vec<Complex64>> {
    let n = a.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    let sign = |x: f64, y: f64| if y >= 0.0 { x.abs() } else { -x.abs() };
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let (mut p, mut q, mut r, mut x, mut y, mut z, mut w);
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l > 0 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= f64::EPSILON * s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[nu][nu];
            if l == nu {
                out[nu] = Complex64::new(x + t, 0.0);
                nn -= 1;
            } else {
                y = a[nu - 1][nu - 1];
                w = a[nu][nu - 1] * a[nu - 1][nu];
                if l == nu - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = libm::sqrt(q.abs());
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        out[nu - 1] = Complex64::new(x + z, 0.0);
                        out[nu] = out[nu - 1];
                        if z != 0.0 {
                            out[nu] = Complex64::new(x - w / z, 0.0);
                        }
                    } else {
                        out[nu] = Complex64::new(x + p, -z);
                        out[nu - 1] = out[nu].conj();
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITER {
                        return Err(Error::NoConvergence { iterations: its });
                    }
                    if its % 10 == 0 && its > 0 {
                        // exceptional shift
                        t += x;
                        for i in 0..=nu {
                            a[i][i] -= x;
                        }
                        let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nu - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u <= f64::EPSILON * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m..nu - 1 {
                        a[i + 2][i] = 0.0;
                        if i != m {
                            a[i + 2][i - 1] = 0.0;
                        }
                    }
                    for k in m..nu {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = 0.0;
                            if k + 1 != nu {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign(libm::sqrt(p * p + q * q + r * r), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nu {
                                p = a[k][j] + q * a[k + 1][j];
                                if k + 1 != nu {
                                    p += r * a[k + 2][j];
                                    a[k + 2][j] -= p * z;
                                }
                                a[k + 1][j] -= p * y;
                                a[k][j] -= p * x;
                            }
                            let mmin = if nu < k + 3 { nu } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k + 1 != nu {
                                    p += z * a[i][k + 2];
                                    a[i][k + 2] -= p * r;
                                }
                                a[i][k + 1] -= p * q;
                                a[i][k] -= p;
                            }
                        }
                    }
                }
            }
            if nn < 1 || (l as isize) >= nn - 1 {
                break;
            }
        }
    }
    Ok(out)
}

// Expand a[m] * prod (z - zeta) and compare with a in the 1-norm.
fn backward_error(a: &[f64], roots: &[Complex64]) -> f64 {
    let m = a.len() - 1;
    let mut c = vec![Complex64::new(0.0, 0.0); m + 1];
    c[0] = Complex64::new(1.0, 0.0);
    for (k, z) in roots.iter().enumerate() {
        for i in (1..=k + 1).rev() {
            c[i] = c[i - 1] - z * c[i];
        }
        c[0] = -z * c[0];
    }
    let num = crate::sum::compensated_sum(c.iter().zip(a).map(|(ci, ai)| (ci * a[m] - ai).norm()));
    let den = crate::sum::compensated_sum(a.iter().map(|x| x.abs()));
    num / den
}

// Walk the single-linkage tree from the shortest edge upwards; after each
// union try replacing the whole component by its centroid.
fn merge_clusters(a: &[f64], raw: Vec<Complex64>, e0: f64) -> (Vec<Complex64>, usize) {
    let m = raw.len();
    if m < 2 {
        return (raw, 0);
    }
    // The input coefficients carry their own rounding, which for a
    // high-multiplicity root shows up as ~1e-11 relative mismatch even at
    // the exact multiple root.
    let threshold = (4.0 * e0).max(MERGE_TOL);
    let mut edges: Vec<(f64, usize, usize)> = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            let scale = raw[i].norm().max(raw[j].norm());
            edges.push(((raw[i] - raw[j]).norm() / scale, i, j));
        }
    }
    edges.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut parent: Vec<usize> = (0..m).collect();
    let mut members: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    let mut current = raw.clone();
    let mut merged_sets: Vec<usize> = Vec::new();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut unions = 0;
    for (_, i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            continue;
        }
        parent[rj] = ri;
        let moved = core::mem::take(&mut members[rj]);
        members[ri].extend(moved);
        unions += 1;
        let group = &members[ri];
        let centroid = group.iter().fold(Complex64::new(0.0, 0.0), |acc, &k| acc + raw[k]) / group.len() as f64;
        let centroid = refine_multiple(a, centroid, group.len());
        let mut trial = current.clone();
        for &k in group {
            trial[k] = centroid;
        }
        if backward_error(a, &trial) <= threshold {
            current = trial;
            merged_sets.retain(|&r| r != ri && r != rj);
            merged_sets.push(ri);
        }
        if unions == m - 1 {
            break;
        }
    }
    (current, merged_sets.len())
}

// A root of multiplicity k is a simple root of f^(k-1); Newton there.
fn refine_multiple(a: &[f64], z0: Complex64, k: usize) -> Complex64 {
    let m = a.len() - 1;
    if k < 2 || k > m {
        return z0;
    }
    let d = k - 1;
    // coefficients of f^(d) scaled by 1/C(m, d): a_j C(j, d) / C(m, d)
    let mut b = vec![0.0; m - d + 1];
    let mut ratio = 1.0;
    for j in (d..=m).rev() {
        b[j - d] = a[j] * ratio;
        ratio *= (j - d) as f64 / j as f64;
    }
    if b.len() == 2 {
        return Complex64::new(-b[0] / b[1], 0.0);
    }
    let mut z = z0;
    for _ in 0..30 {
        let (ratio, small) = newton_ratio(&b, z);
        if small || !(ratio.re.is_finite() && ratio.im.is_finite()) {
            break;
        }
        z -= ratio;
        if ratio.norm() <= 1e-15 * z.norm() {
            break;
        }
    }
    if (z - z0).norm() <= 0.5 * z0.norm() {
        z
    } else {
        z0
    }
}

// A few Newton steps on isolated roots.  A step that is not tiny against
// the distance to the nearest other root means z[i] belongs to an
// unresolved cluster, where Newton would shrink the cluster.
fn polish(a: &[f64], z: &mut [Complex64]) {
    let m = z.len();
    for i in 0..m {
        let gap = (0..m).filter(|&j| j != i).map(|j| (z[j] - z[i]).norm()).fold(f64::INFINITY, f64::min);
        if gap == 0.0 {
            continue;
        }
        for _ in 0..3 {
            let (ratio, small) = newton_ratio(a, z[i]);
            if small || !(ratio.re.is_finite() && ratio.im.is_finite()) || ratio.norm() > 1e-3 * gap {
                break;
            }
            let cand = z[i] - ratio;
            if abs_value(a, cand) < abs_value(a, z[i]) {
                z[i] = cand;
            } else {
                break;
            }
        }
    }
}

// |f(z)| scaled by max(1,|z|)^-m so that values at different radii compare.
fn abs_value(a: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    if r <= 1.0 {
        a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * z + x).norm()
    } else {
        let w = z.inv();
        a.iter().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * w + x).norm()
    }
}

// Match upper and lower half-plane roots, snap near-real roots onto the
// axis, and replace each pair by its exact conjugate average.
fn pair_conjugates(roots: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    let scale = |z: &Complex64| z.norm().max(1.0);
    let mut out = Vec::with_capacity(roots.len());
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut residual: f64 = 0.0;
    for z in roots {
        if z.im.abs() <= PAIR_TOL * scale(z) {
            residual = residual.max(z.im.abs() / scale(z));
            out.push(Complex64::new(z.re, 0.0));
        } else if z.im > 0.0 {
            upper.push(*z);
        } else {
            lower.push(*z);
        }
    }
    if upper.len() != lower.len() {
        return Err(Error::NotConjugateClosed);
    }
    upper.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut used = vec![false; lower.len()];
    for u in &upper {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, l) in lower.iter().enumerate() {
            if !used[j] {
                let d = (u - l.conj()).norm();
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
        }
        used[best] = true;
        residual = residual.max(best_d / scale(u));
        let avg = (u + lower[best].conj()) * 0.5;
        out.push(avg);
        out.push(avg.conj());
    }
    Ok((out, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn coin_root() {
        let d = Distribution::new(&[0.5, 0.5]).unwrap();
        let rs = find_roots(&d).unwrap();
        assert_eq!(rs.roots(), &[c(-1.0, 0.0)]);
        let g = sector_geometry(&rs);
        assert_eq!((g.delta, g.r), (PI, 1.0));
    }

    #[test]
    fn double_root_is_merged() {
        let d = Distribution::new(&[0.25, 0.5, 0.25]).unwrap();
        let rs = find_roots(&d).unwrap();
        assert_eq!(rs.degree(), 2);
        for z in rs.roots() {
            assert!(close(*z, c(-1.0, 0.0), 1e-12), "{z}");
        }
        assert!(rs.condition().close_pair);
    }

    #[test]
    fn cube_roots_of_minus_eight() {
        let d = Distribution::new(&[8.0 / 9.0, 0.0, 0.0, 1.0 / 9.0]).unwrap();
        let rs = find_roots(&d).unwrap();
        let want = [Complex64::from_polar(2.0, -PI / 3.0), Complex64::from_polar(2.0, PI / 3.0), c(-2.0, 0.0)];
        for w in want {
            assert!(rs.roots().iter().any(|z| close(*z, w, 1e-12)), "missing {w}");
        }
        let g = sector_geometry(&rs);
        assert!((g.delta - PI / 3.0).abs() < 1e-12);
        assert!((g.r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn geometry_of_explicit_roots() {
        let rs = RootSet::from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
        let g = sector_geometry(&rs);
        assert!((g.delta - PI / 2.0).abs() < 1e-15);
        assert_eq!(g.r, 1.0);
    }

    #[test]
    fn from_roots_examples() {
        assert_eq!(dist_from_roots(&[c(-1.0, 0.0)]).unwrap().probs(), &[0.5, 0.5]);
        assert_eq!(dist_from_roots(&[c(-1.0, 0.0), c(-1.0, 0.0)]).unwrap().probs(), &[0.25, 0.5, 0.25]);
        assert_eq!(dist_from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap().probs(), &[0.5, 0.0, 0.5]);
        assert!(matches!(dist_from_roots(&[c(0.0, 1.0)]), Err(Error::NotConjugateClosed)));
        assert!(matches!(dist_from_roots(&[c(1.0, 0.0)]), Err(Error::RootAtOne)));
        assert!(matches!(dist_from_roots(&[c(2.0, 0.0)]), Err(Error::NegativeCoefficient { .. })));
    }

    #[test]
    fn expansion_matches_direct_potential() {
        let d = Distribution::new(&[0.5, 0.5]).unwrap();
        let rs = find_roots(&d).unwrap();
        assert!((potential_from_roots(&rs, c(2.0, 0.0)).unwrap() - libm::log(1.5)).abs() < 1e-15);
        assert!((potential_from_roots(&rs, c(0.0, 1.0)).unwrap() + 0.346_573_590_279_972_6).abs() < 1e-15);
        assert!(potential_from_roots(&rs, c(0.0, 0.0)).is_err());
        assert!(potential_from_roots(&rs, c(-1.0, 0.0)).is_err());
    }

    #[test]
    fn obrechkoff_examples() {
        let coin = find_roots(&Distribution::new(&[0.5, 0.5]).unwrap()).unwrap();
        let o = obrechkoff_check(&coin, PI / 2.0);
        assert_eq!((o.count, o.bound, o.ok), (0, 1.0, true));
    }

    #[test]
    fn root_variance_matches_moments() {
        let d = Distribution::new(&[0.1, 0.2, 0.3, 0.25, 0.15]).unwrap();
        let rs = find_roots(&d).unwrap();
        assert!((rs.variance() - d.variance()).abs() < 1e-12);
        assert!((rs.mean() - d.mean()).abs() < 1e-12);
    }
}
