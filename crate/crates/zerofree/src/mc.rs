//! Brownian exit estimates with the walk blocks spread over a thread pool.

use rayon::prelude::*;
use zerofree_core::harmonic::{ExitProblem, McEstimate, PolarRectangle, RectSide};
use zerofree_core::{Complex64, Error};

/// Same result as `ExitProblem::run`, for any number of threads.
pub fn run_parallel(problem: &ExitProblem, walks: u64) -> McEstimate {
    let hits: u64 = (0..ExitProblem::blocks(walks)).into_par_iter().map(|b| problem.run_block(b, walks)).sum();
    McEstimate::from_counts(hits, walks, problem.seed)
}

/// Exit problem from 1 in the `(delta, eta)` rectangle; `step` defaults to
/// `1e-4 * diameter^2`.
pub fn exit_problem(delta: f64, eta: f64, step: Option<f64>, seed: u64) -> Result<ExitProblem, Error> {
    let domain = PolarRectangle::exit_domain(delta, eta)?;
    let step = step.unwrap_or_else(|| domain.default_step());
    ExitProblem::new(domain, Complex64::new(1.0, 0.0), RectSide::ThetaMax, step, seed)
}

pub fn brownian_exit(delta: f64, eta: f64, walks: u64, step: Option<f64>, seed: u64) -> Result<McEstimate, Error> {
    if walks == 0 {
        return Err(Error::InvalidParameter { name: "walks", reason: "need walks >= 1" });
    }
    Ok(run_parallel(&exit_problem(delta, eta, step, seed)?, walks))
}
