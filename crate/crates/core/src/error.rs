use crate::quad::QuadError;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("weight vector is empty")]
    EmptyWeights,
    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("non-finite weight at index {index}")]
    NonFiniteWeight { index: usize },
    #[error("weights sum to zero")]
    ZeroSum,
    #[error("endpoint probability p_{index} is zero")]
    ZeroEndpoint { index: usize },
    #[error("pgf vanishes at {re}{im:+}i")]
    ZeroOfPgf { re: f64, im: f64 },
    #[error("distribution is degenerate (zero variance or vanishing cumulants)")]
    Degenerate,
    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("root multiset is not closed under conjugation")]
    NotConjugateClosed,
    #[error("coefficient {index} is negative ({value}); not a pgf")]
    NegativeCoefficient { index: usize, value: f64 },
    #[error("root at z = 1")]
    RootAtOne,
    #[error("root at z = 0")]
    RootAtZero,
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("hypothesis violated at stage \"{stage}\": {detail}")]
    Hypothesis { stage: &'static str, detail: &'static str },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("coefficients underflow double precision")]
    Underflow,
    #[error("rejection sampling gave up after {attempts} attempts")]
    RejectionCap { attempts: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }

    /// True for errors caused by bad inputs rather than numerical trouble.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NoConvergence { .. } | Error::Quadrature(_) | Error::Underflow | Error::Hypothesis { .. }
        )
    }
}
