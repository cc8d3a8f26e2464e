//! Fixed test corpora: binomials, the extremal lattice family and random
//! root clouds.

use rayon::prelude::*;
use zerofree_core::generators::{binomial, random_root_pgf, sharpness, SharpnessParams};
use zerofree_core::{AnalyzedPgf, Error};

#[derive(Clone, Debug)]
pub struct CorpusMember {
    pub name: String,
    pub pgf: AnalyzedPgf,
}

const BINOMIALS: [(usize, f64); 8] =
    [(1, 0.5), (2, 0.5), (3, 1.0 / 3.0), (4, 0.5), (10, 0.3), (20, 0.5), (40, 0.7), (60, 0.4)];

const SHARPNESS: [(usize, f64, usize); 10] = [
    (3, 1.5, 30),
    (3, 2.0, 60),
    (3, 2.0, 300),
    (4, 1.5, 48),
    (4, 2.0, 40),
    (5, 1.5, 60),
    (5, 2.0, 25),
    (6, 1.5, 60),
    (6, 1.2, 120),
    (6, 2.0, 36),
];

/// Parameters of a random root cloud.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub degree: usize,
    pub delta_min: f64,
    pub r_max: f64,
}

const RANDOM: [RandomSpec; 12] = [
    RandomSpec { degree: 8, delta_min: 1.0, r_max: 2.0 },
    RandomSpec { degree: 12, delta_min: 1.5, r_max: 1.5 },
    RandomSpec { degree: 16, delta_min: 0.8, r_max: 1.5 },
    RandomSpec { degree: 20, delta_min: 2.0, r_max: 2.0 },
    RandomSpec { degree: 24, delta_min: 1.2, r_max: 1.2 },
    RandomSpec { degree: 30, delta_min: 1.0, r_max: 1.5 },
    RandomSpec { degree: 40, delta_min: 1.5, r_max: 1.3 },
    RandomSpec { degree: 40, delta_min: 0.6, r_max: 1.2 },
    RandomSpec { degree: 9, delta_min: 2.5, r_max: 3.0 },
    RandomSpec { degree: 35, delta_min: 1.2, r_max: 1.5 },
    RandomSpec { degree: 5, delta_min: 1.0, r_max: 1.5 },
    RandomSpec { degree: 27, delta_min: 0.9, r_max: 1.4 },
];

const RANDOM_SEED: u64 = 100;

/// 30 members: 8 binomials, 10 lattice-family members with `k <= 6` and
/// 12 random clouds of degree at most 40.
pub fn standard_corpus() -> Result<Vec<CorpusMember>, Error> {
    let mut out = Vec::new();
    for (n, p) in BINOMIALS {
        out.push(CorpusMember { name: format!("binomial(n={n}, p={p:.4})"), pgf: binomial(n, p)? });
    }
    for (k, r, n) in SHARPNESS {
        out.push(CorpusMember {
            name: format!("sharpness(k={k}, R={r}, n={n})"),
            pgf: sharpness(&SharpnessParams::new(k, r, n)?)?,
        });
    }
    let random: Result<Vec<_>, Error> = RANDOM
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let seed = RANDOM_SEED + i as u64;
            let pgf = random_root_pgf(s.degree, s.delta_min, s.r_max, seed)?;
            Ok(CorpusMember { name: random_name(s, seed), pgf })
        })
        .collect();
    out.extend(random?);
    Ok(out)
}

fn random_name(s: &RandomSpec, seed: u64) -> String {
    format!("random(degree={}, delta_min={}, R_max={}, seed={seed})", s.degree, s.delta_min, s.r_max)
}

/// `count` random clouds with seeds `base_seed, base_seed + 1, ...`.
pub fn random_corpus(spec: RandomSpec, base_seed: u64, count: usize) -> Result<Vec<CorpusMember>, Error> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed + i;
            let pgf = random_root_pgf(spec.degree, spec.delta_min, spec.r_max, seed)?;
            Ok(CorpusMember { name: random_name(&spec, seed), pgf })
        })
        .collect()
}
