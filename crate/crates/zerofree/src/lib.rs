//! File formats, reports, corpora, parallel sweeps and the command-line
//! front end built on `zerofree-core`.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod io;
pub mod mc;
pub mod report;
pub mod sweep;

pub use error::AppError;
pub use zerofree_core;
