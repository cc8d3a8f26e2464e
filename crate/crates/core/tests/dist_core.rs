use std::f64::consts::PI;

use proptest::prelude::*;
use zerofree_core::dist::make_distribution;
use zerofree_core::generators::binomial_dist;
use zerofree_core::{special, Complex64, Distribution, Error};

fn coin() -> Distribution {
    Distribution::new(&[0.5, 0.5]).unwrap()
}

/// Kolmogorov distance by brute force: compare F and F- with the normal cdf
/// at every jump.  The normal cdf comes from the musl erfc port in `libm`.
fn kolmogorov_oracle(p: &[f64]) -> f64 {
    let mean: f64 = p.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
    let var: f64 = p.iter().enumerate().map(|(k, x)| (k as f64 - mean).powi(2) * x).sum();
    let cdf = |x: f64| 0.5 * libm::erfc(-(x - mean) / (2.0 * var).sqrt());
    let mut below = 0.0;
    let mut sup: f64 = 0.0;
    for (k, &x) in p.iter().enumerate() {
        let phi = cdf(k as f64);
        sup = sup.max((below - phi).abs());
        below += x;
        sup = sup.max((below - phi).abs());
    }
    sup
}

fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    let lg = |k: usize| statrs::function::gamma::ln_gamma(k as f64 + 1.0);
    (0..=n).map(|k| (lg(n) - lg(k) - lg(n - k) + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()).collect()
}

#[test]
fn normalization_examples() {
    assert_eq!(make_distribution(&[0.5, 0.5]).unwrap().probs(), &[0.5, 0.5]);
    assert_eq!(make_distribution(&[2.0, 2.0]).unwrap().probs(), &[0.5, 0.5]);
    assert!(matches!(make_distribution(&[1.0, -1.0]), Err(Error::NegativeWeight { .. })));
    assert!(make_distribution(&[0.0, 1.0]).is_err());
    assert!(make_distribution(&[1.0, 0.0]).is_err());
    assert!(make_distribution(&[]).is_err());
}

#[test]
fn pgf_and_potential_examples() {
    let c = coin();
    let i = Complex64::i();
    assert!((c.pgf(Complex64::new(1.0, 0.0)) - 1.0).norm() < 1e-15);
    assert!((c.pgf(i) - Complex64::new(0.5, 0.5)).norm() < 1e-15);
    let sq = Distribution::new(&[0.25, 0.5, 0.25]).unwrap();
    assert!(sq.pgf(Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    assert!(c.log_potential(Complex64::new(1.0, 0.0)).unwrap().abs() < 1e-15);
    assert!((c.log_potential(i).unwrap() + 0.5 * 2f64.ln()).abs() < 1e-12);
    assert!(c.log_potential(Complex64::new(-1.0, 0.0)).is_err());
}

#[test]
fn moment_examples() {
    let m = coin().moments(4);
    assert!((m.mean - 0.5).abs() < 1e-15 && (m.variance - 0.25).abs() < 1e-15);
    assert!((m.raw[4] - 0.5).abs() < 1e-15);
    let sq = Distribution::new(&[0.25, 0.5, 0.25]).unwrap();
    assert!((sq.mean() - 1.0).abs() < 1e-15 && (sq.variance() - 0.5).abs() < 1e-15);
    assert_eq!(coin().mode_prob(), 0.5);
    assert_eq!(binomial_dist(4, 0.5).unwrap().mode_prob(), 0.375);
}

#[test]
fn kolmogorov_examples() {
    assert!((coin().kolmogorov_distance().unwrap() - 0.3413447).abs() < 1e-7);
    let sq = Distribution::new(&[0.25, 0.5, 0.25]).unwrap();
    assert!((sq.kolmogorov_distance().unwrap() - 0.25).abs() < 1e-12);
    let b4 = binomial_dist(4, 0.5).unwrap();
    assert!((b4.kolmogorov_distance().unwrap() - 0.1875).abs() < 1e-12);
}

#[test]
fn kolmogorov_matches_statrs_on_binomials() {
    for (n, p) in [(5, 0.3), (16, 0.5), (40, 0.8), (100, 0.1)] {
        let pmf = binomial_pmf(n, p);
        let d = Distribution::new(&pmf).unwrap();
        let got = d.kolmogorov_distance().unwrap();
        assert!((got - kolmogorov_oracle(d.probs())).abs() < 1e-12, "Bin({n},{p})");
    }
}

#[test]
fn potential_growth() {
    let d = Distribution::new(&[0.2, 0.3, 0.1, 0.4]).unwrap();
    let far = |r: f64| d.log_potential(Complex64::from_polar(r, 0.7)).unwrap() - 3.0 * r.ln();
    assert!((far(1e6) - far(1e8)).abs() < 1e-5);
    assert!((far(1e8) - 0.4f64.ln()).abs() < 1e-7);
    let near = d.log_potential(Complex64::from_polar(1e-9, 2.0)).unwrap();
    assert!((near - 0.2f64.ln()).abs() < 1e-8);
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    (1usize..12).prop_flat_map(|n| {
        (0.05f64..1.0, prop::collection::vec(0.0f64..1.0, n - 1), 0.05f64..1.0).prop_map(|(a, mid, b)| {
            let mut w = vec![a];
            w.extend(mid);
            w.push(b);
            w
        })
    })
}

proptest! {
    #[test]
    fn erf_agrees_with_libm(x in -8.0f64..8.0) {
        prop_assert!((special::erf(x) - libm::erf(x)).abs() < 1e-15);
        prop_assert!((special::erfc(x) - libm::erfc(x)).abs() <= 1e-13 * libm::erfc(x));
    }

    // statrs is only good to about 1e-10 near the origin.
    #[test]
    fn erf_agrees_with_statrs(x in -8.0f64..8.0) {
        prop_assert!((special::erf(x) - statrs::function::erf::erf(x)).abs() < 1e-10);
    }

    #[test]
    fn modulus_dominates(w in weights(), logr in -6.9f64..6.9, th in -PI..PI) {
        let d = Distribution::new(&w).unwrap();
        let z = Complex64::from_polar(logr.exp(), th);
        let r = Complex64::new(z.norm(), 0.0);
        prop_assert!(d.pgf(r).norm() >= d.pgf(z).norm() * (1.0 - 1e-12));
        if let (Ok(a), Ok(b)) = (d.log_potential(z), d.log_potential(z.conj())) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn kolmogorov_reversal_invariant(w in weights()) {
        let d = Distribution::new(&w).unwrap();
        let a = d.kolmogorov_distance().unwrap();
        let b = d.reversed().kolmogorov_distance().unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((a - kolmogorov_oracle(d.probs())).abs() < 1e-12);
    }

    #[test]
    fn scaling_invariance(w in weights(), c in 0.01f64..100.0) {
        let a = Distribution::new(&w).unwrap();
        let scaled: Vec<f64> = w.iter().map(|x| x * c).collect();
        let b = Distribution::new(&scaled).unwrap();
        for (x, y) in a.probs().iter().zip(b.probs()) {
            prop_assert!((x - y).abs() < 1e-15);
        }
    }
}
