use std::f64::consts::PI;

use proptest::prelude::*;
use zerofree_core::generators::{random_roots, sharpness, sharpness_family, SharpnessParams};
use zerofree_core::roots::{
    dist_from_roots, find_roots, normalized_coefficients, obrechkoff_check, potential_from_roots, sector_geometry,
};
use zerofree_core::{AnalyzedPgf, Complex64, Distribution, RootSet};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sorted(rs: &RootSet) -> Vec<Complex64> {
    let mut v = rs.roots().to_vec();
    v.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    v
}

#[test]
fn small_root_examples() {
    let coin = find_roots(&Distribution::new(&[0.5, 0.5]).unwrap()).unwrap();
    assert_eq!(coin.degree(), 1);
    assert!((coin.roots()[0] - c(-1.0, 0.0)).norm() < 1e-14);
    let sq = find_roots(&Distribution::new(&[0.25, 0.5, 0.25]).unwrap()).unwrap();
    assert!(sq.roots().iter().all(|z| (z - c(-1.0, 0.0)).norm() < 1e-7));
    let p = SharpnessParams::new(3, 2.0, 3).unwrap();
    let d = sharpness_family(&p).unwrap();
    for (x, y) in d.probs().iter().zip([8.0 / 9.0, 0.0, 0.0, 1.0 / 9.0]) {
        assert!((x - y).abs() < 1e-15);
    }
    let rs = sorted(&find_roots(&d).unwrap());
    let want = [Complex64::from_polar(2.0, -PI / 3.0), Complex64::from_polar(2.0, PI / 3.0), c(-2.0, 0.0)];
    for (z, w) in rs.iter().zip(want) {
        assert!((z - w).norm() < 1e-12, "{z} vs {w}");
    }
}

#[test]
fn geometry_examples() {
    let g = sector_geometry(&RootSet::from_roots(&[c(-1.0, 0.0)]).unwrap());
    assert!((g.delta - PI).abs() < 1e-15 && g.r == 1.0);
    let g = sector_geometry(&RootSet::from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap());
    assert!((g.delta - PI / 2.0).abs() < 1e-15 && (g.r - 1.0).abs() < 1e-15);
    for n in [3, 30, 300] {
        let a = sharpness(&SharpnessParams::new(3, 2.0, n).unwrap()).unwrap();
        assert!((a.geometry.delta - PI / 3.0).abs() < 1e-12);
        assert!((a.geometry.r - 2.0).abs() < 1e-12);
    }
}

#[test]
fn dist_from_roots_examples() {
    let p = dist_from_roots(&[c(-1.0, 0.0)]).unwrap();
    assert_eq!(p.probs(), &[0.5, 0.5]);
    let p = dist_from_roots(&[c(-1.0, 0.0), c(-1.0, 0.0)]).unwrap();
    assert_eq!(p.probs(), &[0.25, 0.5, 0.25]);
    let p = dist_from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
    assert!((p.probs()[0] - 0.5).abs() < 1e-15 && p.probs()[1].abs() < 1e-15 && (p.probs()[2] - 0.5).abs() < 1e-15);
}

#[test]
fn potential_examples() {
    let rs = RootSet::from_roots(&[c(-1.0, 0.0)]).unwrap();
    assert!((potential_from_roots(&rs, c(2.0, 0.0)).unwrap() - 1.5f64.ln()).abs() < 1e-14);
    assert!((potential_from_roots(&rs, c(0.0, 1.0)).unwrap() + 0.5 * 2f64.ln()).abs() < 1e-14);
}

/// Compared against the product `p_n prod |z - zeta|` over the sampled roots
/// everywhere, and against Horner wherever Horner is well conditioned:
/// its relative error grows like `exp(u(|z|) - u(z))`.
#[test]
fn potential_matches_direct_evaluation() {
    let (mut vs_product, mut vs_horner): (f64, f64) = (0.0, 0.0);
    let mut horner_points = 0;
    for seed in 0..10 {
        let a = zerofree_core::generators::random_root_pgf(12, 1.0, 1.5, seed).unwrap();
        let ln_pn = a.dist.probs().last().unwrap().ln();
        for i in 0..12 {
            for j in 0..16 {
                let z = Complex64::from_polar(0.25 * 1.25f64.powi(i), -PI + 2.0 * PI * (j as f64 + 0.5) / 16.0);
                let got = potential_from_roots(&a.roots, z).unwrap();
                let product = ln_pn + a.roots.roots().iter().map(|w| (z - w).norm().ln()).sum::<f64>();
                vs_product = vs_product.max((got - product).abs());
                let horner = a.dist.log_potential(z).unwrap();
                let cond = a.dist.log_potential(Complex64::new(z.norm(), 0.0)).unwrap() - horner;
                if cond <= 10.0 {
                    horner_points += 1;
                    vs_horner = vs_horner.max((got - horner).abs());
                }
            }
        }
    }
    assert!(vs_product <= 1e-10, "{vs_product}");
    assert!(vs_horner <= 1e-10, "{vs_horner}");
    assert!(horner_points > 1800);
}

#[test]
fn obrechkoff_examples() {
    let coin = RootSet::from_roots(&[c(-1.0, 0.0)]).unwrap();
    let o = obrechkoff_check(&coin, PI / 2.0);
    assert_eq!(o.count, 0);
    assert!((o.bound - 1.0).abs() < 1e-15 && o.ok);
    for k in 3..=8 {
        let a = sharpness(&SharpnessParams::new(k, 2.0, 60 * k).unwrap()).unwrap();
        let o = obrechkoff_check(&a.roots, PI / k as f64);
        assert_eq!(o.count, 120);
        assert!((o.bound - 120.0).abs() < 1e-9 && o.ok);
    }
}

#[test]
fn sharpness_found_roots_match_closed_form() {
    let a = sharpness(&SharpnessParams::new(4, 1.5, 40).unwrap()).unwrap();
    let found = AnalyzedPgf::from_distribution(a.dist.clone()).unwrap();
    assert!((found.geometry.delta - PI / 4.0).abs() < 1e-9);
    assert!((found.geometry.r - 1.5).abs() < 1e-9);
    let o = obrechkoff_check(&found.roots, PI / 4.0);
    assert_eq!(o.count, 20);
}

fn root_cloud() -> impl Strategy<Value = Vec<Complex64>> {
    (1usize..=30, 0.3f64..PI, 1.0f64..2.0, any::<u64>()).prop_filter_map("negative coefficients", |(n, d, r, seed)| {
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let roots = random_roots(n, d, r, &mut rng).ok()?;
        let w = normalized_coefficients(&roots).ok()?;
        w.iter().all(|&x| x >= 0.0).then_some(roots)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip(roots in root_cloud()) {
        let d = Distribution::new(&normalized_coefficients(&roots).unwrap()).unwrap();
        let rs = find_roots(&d).unwrap();
        prop_assert!(rs.roots().iter().all(|z| !(z.im == 0.0 && z.re > 0.0)));
        let back = normalized_coefficients(rs.roots()).unwrap();
        let err = back.iter().zip(d.probs()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-8, "error {}", err);
        prop_assert!(obrechkoff_check(&rs, 1.0).ok);
        prop_assert!(obrechkoff_check(&rs, PI / 2.0).ok);
    }

    #[test]
    fn geometry_conjugation_invariant(roots in root_cloud()) {
        let rs = RootSet::from_roots(&roots).unwrap();
        prop_assert_eq!(sector_geometry(&rs), sector_geometry(&rs.conjugated()));
    }
}
