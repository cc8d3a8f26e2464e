use zerofree_core::Error;

/// Failure classes of the command-line tool, one per nonzero exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Malformed or invalid input; exit code 2.
    #[error("input error: {0}")]
    Input(String),
    /// Root finding, quadrature or representability failure; exit code 3.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A verification check or hypothesis failed; exit code 1.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Verification(_) => 1,
            AppError::Input(_) => 2,
            AppError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        match e {
            Error::Hypothesis { stage, detail } => AppError::Verification(format!("{stage}: {detail}")),
            e if e.is_input_error() => AppError::Input(e.to_string()),
            e => AppError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for AppError {
    fn from(e: serde_json::Error) -> Self {
        AppError::Input(format!("malformed JSON: {e}"))
    }
}

impl From<csv::Error> for AppError {
    fn from(e: csv::Error) -> Self {
        AppError::Input(e.to_string())
    }
}
