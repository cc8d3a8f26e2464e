//! The JSON input document: a probability vector or a root multiset.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use zerofree_core::{AnalyzedPgf, Complex64, Distribution};

use crate::AppError;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    pub schema: u32,
    #[serde(flatten)]
    pub body: InputBody,
    /// Free-form provenance written by `generate`; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase")]
pub enum InputBody {
    Probs { values: Vec<f64> },
    Roots { roots: Vec<[f64; 2]> },
}

impl InputDocument {
    pub fn probs(values: Vec<f64>) -> Self {
        InputDocument { schema: SCHEMA, body: InputBody::Probs { values }, source: None }
    }

    pub fn roots(roots: &[Complex64]) -> Self {
        let roots = roots.iter().map(|z| [z.re, z.im]).collect();
        InputDocument { schema: SCHEMA, body: InputBody::Roots { roots }, source: None }
    }

    pub fn with_source(mut self, source: serde_json::Value) -> Self {
        self.source = Some(source);
        self
    }

    pub fn parse(text: &str) -> Result<Self, AppError> {
        let doc: InputDocument = serde_json::from_str(text)?;
        if doc.schema != SCHEMA {
            return Err(AppError::Input(format!("unsupported schema {} (expected {SCHEMA})", doc.schema)));
        }
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, AppError> {
        let text = fs::read_to_string(path).map_err(|e| AppError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("input documents always serialize")
    }

    /// Validate and compute roots and geometry.
    pub fn analyze(&self) -> Result<AnalyzedPgf, AppError> {
        match &self.body {
            InputBody::Probs { values } => {
                let d = Distribution::new(values)?;
                Ok(AnalyzedPgf::from_distribution(d)?)
            }
            InputBody::Roots { roots } => {
                let zs: Vec<Complex64> = roots.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                Ok(AnalyzedPgf::from_roots(&zs)?)
            }
        }
    }
}
