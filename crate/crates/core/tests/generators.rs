use std::f64::consts::PI;

use zerofree_core::dist::make_distribution;
use zerofree_core::generators::*;
use zerofree_core::{Complex64, Error};

#[test]
fn lattice_examples() {
    let d = sharpness_family(&SharpnessParams::new(3, 2.0, 3).unwrap()).unwrap();
    let want = [8.0 / 9.0, 0.0, 0.0, 1.0 / 9.0];
    assert!(d.probs().iter().zip(want).all(|(x, y)| (x - y).abs() < 1e-15));
    let d = sharpness_family(&SharpnessParams::new(3, 1.0, 3).unwrap()).unwrap();
    assert_eq!(d.probs(), &[0.5, 0.0, 0.0, 0.5]);
    let p = SharpnessParams::new(3, 2.0, 300).unwrap();
    assert!((sharpness_family(&p).unwrap().variance() - 800.0 / 9.0).abs() < 1e-9);
    assert!((p.variance() - 800.0 / 9.0).abs() < 1e-9);
    assert!(SharpnessParams::new(2, 2.0, 4).is_err());
    assert!(SharpnessParams::new(3, 2.0, 4).is_err());
    assert!(SharpnessParams::new(3, 0.5, 3).is_err());
}

#[test]
fn lattice_underflow_is_reported() {
    let p = SharpnessParams::new(8, 3.0, 960).unwrap();
    assert!(matches!(sharpness_family(&p), Err(Error::Underflow)));
}

#[test]
fn binomial_examples() {
    assert_eq!(binomial_dist(1, 0.5).unwrap().probs(), &[0.5, 0.5]);
    let d = binomial_dist(2, 0.5).unwrap();
    assert!(d.probs().iter().zip([0.25, 0.5, 0.25]).all(|(x, y)| (x - y).abs() < 1e-15));
    let a = binomial(3, 1.0 / 3.0).unwrap();
    assert!(a.roots.roots().iter().all(|z| (z - Complex64::new(-2.0, 0.0)).norm() < 1e-12));
    assert!(binomial_dist(0, 0.5).is_err());
    assert!(binomial_dist(3, 1.0).is_err());
}

#[test]
fn random_examples() {
    let a = random_root_dist(8, PI / 3.0, 2.0, 7).unwrap();
    let b = random_root_dist(8, PI / 3.0, 2.0, 7).unwrap();
    assert_eq!(a, b);
    let g = random_root_pgf(8, PI / 3.0, 2.0, 7).unwrap().geometry;
    assert!(g.delta >= PI / 3.0 && g.r <= 2.0 + 1e-12 && g.degree == 8);
    let d = random_root_dist(2, PI, 1.0, 3).unwrap();
    assert!(d.probs().iter().zip([0.25, 0.5, 0.25]).all(|(x, y)| (x - y).abs() < 1e-15));
    assert!(random_root_dist(0, 1.0, 2.0, 1).is_err());
    assert!(random_root_dist(4, 0.0, 2.0, 1).is_err());
    assert!(random_root_dist(4, 1.0, 0.5, 1).is_err());
}

#[test]
fn generated_distributions_validate() {
    let mut all = Vec::new();
    for k in 3..=6 {
        all.push(sharpness_family(&SharpnessParams::new(k, 1.5, 12 * k).unwrap()).unwrap());
    }
    for seed in 0..20 {
        all.push(random_root_dist(15, 1.0, 1.5, seed).unwrap());
    }
    for n in [1, 7, 50] {
        all.push(binomial_dist(n, 0.3).unwrap());
    }
    for d in all {
        assert_eq!(make_distribution(d.probs()).unwrap().probs().len(), d.probs().len());
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn lattice_theta_bands() {
    for k in 3..=8 {
        for r in [1.5f64, 2.0, 3.0] {
            let n = 120 * k;
            if (n / k) as f64 * r.powi(-(k as i32)) < 4.0 {
                continue;
            }
            let d = sharpness_family(&SharpnessParams::new(k, r, n).unwrap()).unwrap();
            let delta = PI / k as f64;
            let var_band = d.variance() * delta * r.powf(PI / delta) / n as f64;
            let mode_band = d.mode_prob() * delta.sqrt() * r.powf(-PI / (2.0 * delta)) * (n as f64).sqrt();
            assert!((0.2..=5.0).contains(&var_band), "k={k} R={r}: {var_band}");
            assert!((0.1..=10.0).contains(&mode_band), "k={k} R={r}: {mode_band}");
        }
    }
}
