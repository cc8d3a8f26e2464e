//! Sweeps over the extremal lattice family, written as CSV.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use zerofree_core::bounds::bound_shapes;
use zerofree_core::generators::{sharpness, SharpnessParams};
use zerofree_core::Error;

use crate::AppError;

pub const HEADER: [&str; 13] = [
    "k",
    "R",
    "n",
    "delta",
    "R_geom",
    "var",
    "shape_basic",
    "shape_sharper",
    "end_ratio",
    "mode_prob",
    "lwo_shape",
    "mode_ratio",
    "kolmogorov",
];

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub r: f64,
    pub n: usize,
    pub delta: f64,
    pub r_geom: f64,
    pub var: f64,
    pub shape_basic: f64,
    pub shape_sharper: f64,
    pub end_ratio: f64,
    pub mode_prob: f64,
    pub lwo_shape: f64,
    pub mode_ratio: f64,
    pub kolmogorov: f64,
}

impl SweepRow {
    fn fields(&self) -> [String; 13] {
        [
            self.k.to_string(),
            self.r.to_string(),
            self.n.to_string(),
            self.delta.to_string(),
            self.r_geom.to_string(),
            self.var.to_string(),
            self.shape_basic.to_string(),
            self.shape_sharper.to_string(),
            self.end_ratio.to_string(),
            self.mode_prob.to_string(),
            self.lwo_shape.to_string(),
            self.mode_ratio.to_string(),
            self.kolmogorov.to_string(),
        ]
    }
}

/// `n` for each grid point: a fixed value or a multiple of `k` (`"120k"`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NSpec {
    Fixed(usize),
    PerK(usize),
}

impl NSpec {
    pub fn for_k(self, k: usize) -> usize {
        match self {
            NSpec::Fixed(n) => n,
            NSpec::PerK(c) => c * k,
        }
    }
}

impl FromStr for NSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("invalid n '{s}': expected an integer or '<c>k'");
        match s.strip_suffix('k') {
            Some(c) => c.parse().map(NSpec::PerK).map_err(|_| bad()),
            None => s.parse().map(NSpec::Fixed).map_err(|_| bad()),
        }
    }
}

/// Parse `"3..8"` (inclusive) or `"3,4,6"`.
pub fn parse_k_range(s: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("invalid k range '{s}'");
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| format!("invalid number '{x}'"))).collect()
}

pub fn row(k: usize, r: f64, n: usize) -> Result<SweepRow, Error> {
    let a = sharpness(&SharpnessParams::new(k, r, n)?)?;
    let g = a.geometry;
    let var = a.dist.variance();
    let shapes = bound_shapes(&g);
    let mode_prob = a.dist.mode_prob();
    Ok(SweepRow {
        k,
        r,
        n,
        delta: g.delta,
        r_geom: g.r,
        var,
        shape_basic: shapes.basic,
        shape_sharper: shapes.sharper,
        end_ratio: var / shapes.basic,
        mode_prob,
        lwo_shape: shapes.lwo,
        mode_ratio: mode_prob / shapes.lwo,
        kolmogorov: a.dist.kolmogorov_distance()?,
    })
}

/// Rows in grid order (`k` outer, `R` inner).  Grid points whose
/// coefficients underflow are dropped and reported in the second vector.
pub fn sharpness_sweep(ks: &[usize], rs: &[f64], n: NSpec) -> Result<(Vec<SweepRow>, Vec<String>), AppError> {
    let grid: Vec<(usize, f64)> = ks.iter().flat_map(|&k| rs.iter().map(move |&r| (k, r))).collect();
    let results: Vec<Result<SweepRow, Error>> = grid.par_iter().map(|&(k, r)| row(k, r, n.for_k(k))).collect();
    let mut rows = Vec::with_capacity(grid.len());
    let mut warnings = Vec::new();
    for ((k, r), res) in grid.iter().zip(results) {
        match res {
            Ok(row) => rows.push(row),
            Err(Error::Underflow) => {
                warnings.push(format!("skipping k={k} R={r} n={}: coefficients underflow", n.for_k(*k)))
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((rows, warnings))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), AppError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}
