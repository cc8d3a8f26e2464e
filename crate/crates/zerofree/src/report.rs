//! JSON report documents.

use serde::Serialize;
use zerofree_core::bounds::{bound_shapes, corollary_ratios, BoundShapes, VerificationReport};
use zerofree_core::harmonic::McEstimate;
use zerofree_core::{AnalysisConfig, AnalyzedPgf};

use crate::io::SCHEMA;
use crate::AppError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct GeometryOut {
    pub delta: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub degree: usize,
    pub roots_inside_unit_disk: usize,
    pub min_root_separation: f64,
    pub merged_clusters: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentsOut {
    pub mean: f64,
    pub var: f64,
    pub mode_prob: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapesOut {
    pub basic: f64,
    pub sharper: f64,
    pub lwo: f64,
    pub eps: f64,
}

impl From<BoundShapes> for ShapesOut {
    fn from(s: BoundShapes) -> Self {
        ShapesOut { basic: s.basic, sharper: s.sharper, lwo: s.lwo, eps: s.eps }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryOut {
    pub mode_ratio: f64,
    pub clt_ratio: f64,
    pub kolmogorov: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOut {
    pub name: String,
    pub outcome: &'static str,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigOut {
    pub gamma: f64,
    pub tau: f64,
    pub s: f64,
    pub eta: f64,
    pub eps: f64,
    pub alpha: f64,
    #[serde(rename = "M")]
    pub m: f64,
}

impl From<AnalysisConfig> for ConfigOut {
    fn from(c: AnalysisConfig) -> Self {
        ConfigOut { gamma: c.gamma, tau: c.tau, s: c.s, eta: c.eta, eps: c.eps, alpha: c.alpha, m: c.m }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationOut {
    pub status: &'static str,
    pub config: ConfigOut,
    pub var: f64,
    pub phi_at_1: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub end_ratio: f64,
    pub end_ratio_sharper: f64,
    pub checks: Vec<CheckOut>,
    pub truncation: Vec<CheckOut>,
}

impl From<&VerificationReport> for VerificationOut {
    fn from(r: &VerificationReport) -> Self {
        let checks = r
            .checks
            .iter()
            .map(|c| CheckOut {
                name: c.name().to_string(),
                outcome: c.outcome.as_str(),
                value: c.value,
                threshold: c.threshold,
            })
            .collect();
        let truncation = r
            .truncation
            .iter()
            .map(|c| CheckOut {
                name: c.name.to_string(),
                outcome: c.outcome.as_str(),
                value: c.value,
                threshold: c.threshold,
            })
            .collect();
        VerificationOut {
            status: if r.passed() { "pass" } else { "fail" },
            config: r.config.into(),
            var: r.var,
            phi_at_1: r.phi_at_1,
            h: r.h_value,
            r1: r.r1,
            r2: r.r2,
            r3: r.r3,
            end_ratio: r.end_ratio,
            end_ratio_sharper: r.end_ratio_sharper,
            checks,
            truncation,
        }
    }
}

/// Everything `analyze` and `verify` write.  `config` echoes the command
/// line so the report can be regenerated.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub config: serde_json::Value,
    pub geometry: GeometryOut,
    pub moments: MomentsOut,
    pub shapes: ShapesOut,
    pub corollary: Option<CorollaryOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl ReportDocument {
    pub fn analyze(a: &AnalyzedPgf, command: &'static str, config: serde_json::Value) -> Result<Self, AppError> {
        let g = &a.geometry;
        let cond = a.roots.condition();
        let m = a.dist.moments(2);
        let corollary = if m.variance > 0.0 {
            let c = corollary_ratios(&a.dist, g)?;
            Some(CorollaryOut {
                mode_ratio: c.mode_ratio,
                clt_ratio: c.clt_ratio,
                kolmogorov: a.dist.kolmogorov_distance()?,
            })
        } else {
            None
        };
        Ok(ReportDocument {
            schema: SCHEMA,
            tool_version: TOOL_VERSION,
            command,
            config,
            geometry: GeometryOut {
                delta: g.delta,
                r: g.r,
                degree: g.degree,
                roots_inside_unit_disk: a.roots.n_inside(),
                min_root_separation: cond.min_separation,
                merged_clusters: cond.merged_clusters,
            },
            moments: MomentsOut { mean: m.mean, var: m.variance, mode_prob: a.dist.mode_prob() },
            shapes: bound_shapes(g).into(),
            corollary,
            verification: None,
            failure: None,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct McParams {
    pub delta: f64,
    pub eta: f64,
    pub walks: u64,
    pub step: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub schema: u32,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub config: McParams,
    pub p_hat: f64,
    pub stderr: f64,
    pub walks: u64,
    pub seed: u64,
}

impl McReport {
    pub fn new(config: McParams, est: &McEstimate) -> Self {
        McReport {
            schema: SCHEMA,
            tool_version: TOOL_VERSION,
            command: "mc-exit",
            config,
            p_hat: est.p_hat,
            stderr: est.stderr,
            walks: est.walks,
            seed: est.seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}
