mod common;

use proptest::prelude::*;
use zerofree_core::cumulants::{bes_witness, cumulant_decay_ratio, normalized_cumulants, phi_via_cumulant_series};
use zerofree_core::harmonic::phi_gamma;
use zerofree_core::{Complex64, Distribution};

fn coin() -> Distribution {
    Distribution::new(&[0.5, 0.5]).unwrap()
}

/// Cumulants from raw moments by the textbook recursion
/// `kappa_n = m_n - sum_{k=1}^{n-1} C(n-1, k-1) kappa_k m_{n-k}`.
fn kappa_oracle(p: &[f64], order: usize) -> Vec<f64> {
    let m: Vec<f64> =
        (0..=order).map(|j| p.iter().enumerate().map(|(k, x)| x * (k as f64).powi(j as i32)).sum()).collect();
    let binom = |n: usize, k: usize| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    let mut kappa = vec![0.0; order + 1];
    for n in 1..=order {
        let mut s = m[n];
        for k in 1..n {
            s -= binom(n - 1, k - 1) * kappa[k] * m[n - k];
        }
        kappa[n] = s;
    }
    kappa
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

#[test]
fn coin_sequence() {
    let c = normalized_cumulants(&coin(), 4).unwrap();
    let want = [0.5, 0.125, 0.0, -1.0 / 192.0];
    for (j, w) in want.iter().enumerate() {
        assert!((c.get(j + 1) - w).abs() < 1e-15, "a_{}", j + 1);
    }
    let sq = normalized_cumulants(&Distribution::new(&[0.25, 0.5, 0.25]).unwrap(), 2).unwrap();
    assert!((sq.get(1) - 1.0).abs() < 1e-15 && (sq.get(2) - 0.25).abs() < 1e-15);
}

#[test]
fn matches_moment_recursion() {
    let d = Distribution::new(&[0.1, 0.2, 0.05, 0.4, 0.25]).unwrap();
    let c = normalized_cumulants(&d, 8).unwrap();
    let k = kappa_oracle(d.probs(), 8);
    for (j, kj) in k.iter().enumerate().skip(1) {
        assert!((c.get(j) - kj / factorial(j)).abs() < 1e-12, "a_{j}");
    }
}

#[test]
fn phi_series_examples() {
    let c = normalized_cumulants(&coin(), 40).unwrap();
    let want = -(0.05f64).cos().ln();
    assert!((phi_via_cumulant_series(&c, 0.1) - want).abs() < 1e-9);
    assert_eq!(phi_via_cumulant_series(&c, 0.0), 0.0);
    let sq = normalized_cumulants(&Distribution::new(&[0.25, 0.5, 0.25]).unwrap(), 40).unwrap();
    assert!((phi_via_cumulant_series(&sq, 0.1) - 2.0 * want).abs() < 1e-9);
}

#[test]
fn phi_series_error_shrinks_with_gamma() {
    let d = Distribution::new(&[0.3, 0.1, 0.4, 0.2]).unwrap();
    let j = 8;
    let c = normalized_cumulants(&d, j).unwrap();
    let err = |g: f64| (phi_via_cumulant_series(&c, g) - phi_gamma(&d, Complex64::new(1.0, 0.0), g).unwrap()).abs();
    let (e1, e2) = (err(0.2), err(0.1));
    // truncation after the even order 8 leaves O(gamma^10)
    assert!(e2 < e1 * 2f64.powi(-(j as i32)), "{e1} {e2}");
}

#[test]
fn decay_ratio_examples() {
    let c = normalized_cumulants(&coin(), 40).unwrap();
    assert_eq!(cumulant_decay_ratio(&c, 0.1, 2).unwrap(), 1.0);
    let r4 = cumulant_decay_ratio(&c, 0.1, 4).unwrap();
    assert!(r4 <= 0.01);
    assert!(cumulant_decay_ratio(&c, 0.1, 3).unwrap() >= r4);
    // direct truncated summation
    let tail: f64 = (4..=40).map(|j| c.get(j).abs() * 0.1f64.powi(j as i32)).sum();
    let all: f64 = (2..=40).map(|j| c.get(j).abs() * 0.1f64.powi(j as i32)).sum();
    assert!((r4 - tail / all).abs() < 1e-14);
    assert!(cumulant_decay_ratio(&c, 0.5, 4).is_err());
    assert!(cumulant_decay_ratio(&c, 0.1, 41).is_err());
}

#[test]
fn bes_witness_examples() {
    let c = normalized_cumulants(&coin(), 4).unwrap();
    let w = bes_witness(&c, 0.1, 3).unwrap().unwrap();
    assert!(w > 0.0 && w <= 0.1);
    let b = normalized_cumulants(&Distribution::new(&[2.0, 1.0]).unwrap(), 12).unwrap();
    assert!(bes_witness(&b, 0.1, 3).unwrap().is_some());
    let point = normalized_cumulants(&Distribution::new(&[1.0]).unwrap(), 4).unwrap();
    assert!(bes_witness(&point, 0.1, 3).is_err());
}

proptest! {
    #[test]
    fn low_order_identities(w in prop::collection::vec(0.01f64..1.0, 2..30)) {
        let d = Distribution::new(&w).unwrap();
        let c = normalized_cumulants(&d, 20).unwrap();
        prop_assert!((c.get(1) - d.mean()).abs() <= 1e-10);
        prop_assert!((2.0 * c.get(2) - d.variance()).abs() <= 1e-9);
        let mut prev = 1.0;
        for l in 2..=20 {
            let r = cumulant_decay_ratio(&c, 0.3, l).unwrap();
            prop_assert!((0.0..=1.0).contains(&r) && r <= prev);
            prev = r;
        }
    }
}
