use std::f64::consts::PI;

use zerofree_core::bounds::*;
use zerofree_core::generators::{binomial, binomial_dist, sharpness, SharpnessParams};
use zerofree_core::{AnalyzedPgf, Complex64, Distribution, Error, SectorGeometry};

fn sh(k: usize, r: f64, n: usize) -> AnalyzedPgf {
    sharpness(&SharpnessParams::new(k, r, n).unwrap()).unwrap()
}

#[test]
fn shape_examples() {
    let coin = bound_shapes(&SectorGeometry { delta: PI, r: 1.0, degree: 1 });
    assert!((coin.basic - 1.0).abs() < 1e-15);
    assert!((coin.lwo - 1.0 / PI).abs() < 1e-15);
    assert!((coin.sharper - 1.0).abs() < 1e-15);
    let s = bound_shapes(&sh(3, 2.0, 300).geometry);
    assert!((s.basic - 4.6875).abs() < 1e-9);
    assert!((s.lwo - 3.0 / PI * 8.0 / 300f64.sqrt()).abs() < 1e-9);
    assert!((s.lwo - 0.4411).abs() < 1e-4);
}

#[test]
fn corollary_examples() {
    let coin = binomial(1, 0.5).unwrap();
    let c = corollary_ratios(&coin.dist, &coin.geometry).unwrap();
    assert!((c.mode_ratio - PI / 2.0).abs() < 1e-12);
    let b4 = binomial(4, 0.5).unwrap();
    let c = corollary_ratios(&b4.dist, &b4.geometry).unwrap();
    assert!((c.mode_ratio - 0.375 * 2.0 * PI).abs() < 1e-12);
    let s = sh(3, 2.0, 300);
    let c = corollary_ratios(&s.dist, &s.geometry).unwrap();
    assert!(c.mode_ratio > 0.0 && c.clt_ratio > 0.0);
}

#[test]
fn chain_on_lattice_family() {
    let r = verify_chain(&sh(3, 2.0, 300), &ChainOptions::default()).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure());
    for v in [r.r1, r.r2, r.r3, r.end_ratio, r.end_ratio_sharper, r.h_value, r.phi_at_1] {
        assert!(v > 0.0 && v.is_finite());
    }
    assert!((r.var - 800.0 / 9.0).abs() < 1e-9);
}

#[test]
fn chain_on_coin() {
    let coin = binomial(1, 0.5).unwrap();
    let r = verify_chain(&coin, &ChainOptions::default()).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure());
    assert!(r.r1 > 0.0 && r.r2 > 0.0 && r.r3 > 0.0 && r.end_ratio > 0.0);
}

#[test]
fn sector_violation_is_named() {
    let a = sh(3, 2.0, 30);
    let opts = ChainOptions { delta: Some(1.5), ..ChainOptions::default() };
    match verify_chain(&a, &opts) {
        Err(Error::Hypothesis { stage, .. }) => assert_eq!(stage, "sector hypothesis"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn check_selection() {
    let opts = ChainOptions { checks: Some(vec![CheckKind::PhiPositivity]), ..ChainOptions::default() };
    let r = verify_chain(&binomial(10, 0.3).unwrap(), &opts).unwrap();
    // the sector hypothesis is a precondition and always reported
    let names: Vec<_> = r.checks.iter().map(|c| c.name()).collect();
    assert_eq!(names, ["sector hypothesis", "phi positivity"]);
    for k in CheckKind::ALL {
        assert_eq!(CheckKind::from_name(k.name()), Some(k));
    }
}

#[test]
fn doubling_n_keeps_end_ratio() {
    for (k, r) in [(3, 2.0), (4, 1.5), (6, 1.2)] {
        let a = verify_chain(&sh(k, r, 60 * k), &ChainOptions::default()).unwrap();
        let b = verify_chain(&sh(k, r, 120 * k), &ChainOptions::default()).unwrap();
        assert!((b.var / a.var - 2.0).abs() < 1e-9);
        assert!((b.shapes.basic / a.shapes.basic - 2.0).abs() < 1e-9);
        assert!((b.end_ratio / a.end_ratio - 1.0).abs() < 0.05);
    }
}

#[test]
fn r3_band_for_narrow_sectors() {
    for (k, r, n) in [(5, 1.5, 60), (6, 1.5, 60), (6, 2.0, 36), (8, 1.2, 80)] {
        let rep = verify_chain(&sh(k, r, n), &ChainOptions::default()).unwrap();
        assert!((0.01..=10.0).contains(&rep.r3), "k={k}: r3 = {}", rep.r3);
    }
}

#[test]
fn corollary_ratios_bounded() {
    let mut worst: f64 = 0.0;
    let mut members: Vec<AnalyzedPgf> =
        [(1, 0.5), (4, 0.5), (20, 0.5), (60, 0.4)].iter().map(|&(n, p)| binomial(n, p).unwrap()).collect();
    members.extend([sh(3, 2.0, 60), sh(4, 1.5, 48), sh(5, 2.0, 25), sh(6, 1.2, 120)]);
    for a in &members {
        let c = corollary_ratios(&a.dist, &a.geometry).unwrap();
        worst = worst.max(c.mode_ratio).max(c.clt_ratio);
    }
    assert!(worst < 10.0, "{worst}");
}

#[test]
fn empirical_constant_examples() {
    let one = verify_chain(&sh(4, 2.0, 40), &ChainOptions::default()).unwrap();
    let (c, cs) = empirical_constant(std::slice::from_ref(&one)).unwrap();
    assert_eq!(c, one.end_ratio);
    assert_eq!(cs, one.end_ratio_sharper);
    assert!(empirical_constant(&[]).is_err());
}

#[test]
fn config_defaults() {
    let geom = SectorGeometry { delta: PI / 3.0, r: 2.0, degree: 30 };
    let cfg = chain_config(&geom, &ChainOptions::default()).unwrap();
    assert!((cfg.gamma - PI / 3.0 / 128.0).abs() < 1e-15);
    assert!((cfg.tau - 0.999 * PI / 3.0).abs() < 1e-15);
    assert!((cfg.m - 8.0).abs() < 1e-12);
    let narrow = SectorGeometry { delta: 0.5, r: 2.0, degree: 30 };
    assert!((chain_config(&narrow, &ChainOptions::default()).unwrap().m - 3.0).abs() < 1e-12);
    // a distribution with a root at -1 only
    let d = binomial_dist(3, 0.5).unwrap();
    let a = AnalyzedPgf::from_distribution(d).unwrap();
    assert!(chain_config(&a.geometry, &ChainOptions { delta: Some(PI), ..Default::default() }).is_ok());
    let rot = AnalyzedPgf::from_roots(&[Complex64::from_polar(1.0, 2.0), Complex64::from_polar(1.0, -2.0)]).unwrap();
    assert!(chain_config(&rot.geometry, &ChainOptions { delta: Some(2.5), ..Default::default() }).is_err());
    let _ = Distribution::new(&[1.0]).unwrap();
}
