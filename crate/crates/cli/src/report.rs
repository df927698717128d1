use serde::{Deserialize, Serialize};

use hcf_core::flow::Diagnostics;
use hcf_core::Matrix;

use crate::algebra_file::AlgebraFile;

/// Complex matrix as rows of `[re, im]` pairs.
pub type MatrixRows = Vec<Vec<[f64; 2]>>;

pub fn matrix_rows(m: &Matrix) -> MatrixRows {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

/// Everything a command produced, in a form that serializes losslessly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub convention_version: String,
    pub tool_version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub settings: Option<Settings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub termination: String,
    pub wall_time_s: f64,
    pub payload: Payload,
}

impl RunReport {
    pub fn new(command: &str, payload: Payload) -> Self {
        RunReport {
            convention_version: hcf_core::CONVENTION_VERSION.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input: None,
            settings: None,
            seed: None,
            termination: "completed".to_string(),
            wall_time_s: 0.0,
            payload,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    /// `file:<path>` or `catalog:<name>`.
    pub source: String,
    pub algebra: AlgebraFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub fixed_point_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_times: Option<usize>,
}

/// One recorded state; the columns of the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub norm_sq: f64,
    /// `None` for the zero bracket.
    pub f: Option<f64>,
    pub tr_k: f64,
    pub residual: f64,
    pub spectrum: Vec<f64>,
}

impl TraceRow {
    pub fn new(t: f64, d: &Diagnostics<f64>) -> Self {
        TraceRow {
            t,
            norm_sq: d.norm_sq,
            f: d.f_defined.then_some(d.f_value),
            tr_k: d.tr_k,
            residual: d.residual,
            spectrum: d.spectrum.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub dim: usize,
    pub samples: usize,
    pub accepted_steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last: Option<TraceRow>,
    /// Full trace, present with `--format json`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<TraceRow>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolitonPayload {
    pub c: f64,
    pub d: MatrixRows,
    pub classification: String,
    pub is_soliton: bool,
    pub soliton_residual: f64,
    pub derivation_residual: f64,
    pub symmetric: bool,
    pub shortcut_c: f64,
    pub shortcut_residual: f64,
    pub k_norm: f64,
}

impl From<&hcf_core::Report> for SolitonPayload {
    fn from(r: &hcf_core::Report) -> Self {
        SolitonPayload {
            c: r.c,
            d: matrix_rows(&r.d),
            classification: r.classification.as_str().to_string(),
            is_soliton: r.is_soliton(),
            soliton_residual: r.soliton_residual,
            derivation_residual: r.derivation_residual,
            symmetric: r.symmetric,
            shortcut_c: r.shortcut_c,
            shortcut_residual: r.shortcut_residual,
            k_norm: r.k_norm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeLimitPayload {
    pub seed: u64,
    pub termination: String,
    pub residual: f64,
    pub f_value: f64,
    pub spectrum: Vec<f64>,
    pub classification: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Validate {
        dim: usize,
        two_step: bool,
        abelian: bool,
        center_dim: usize,
        derivation_dim: usize,
        jacobi_residual: f64,
        norm_sq: f64,
    },
    Curvature {
        k: MatrixRows,
        spectrum: Vec<f64>,
        tr_k: f64,
        half_norm_sq: f64,
        static_residual: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f_value: Option<f64>,
        /// `K(h)` components and spectrum relative to `h` when the input
        /// carries a metric.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        metric_tensor: Option<MatrixRows>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        metric_spectrum: Option<Vec<f64>>,
    },
    Flow {
        trace: TraceSummary,
        /// Soliton certificate of the final state when the normalized flow
        /// reached a fixed point.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit: Option<SolitonPayload>,
        /// Final metric of the metric flow.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        metric: Option<MatrixRows>,
    },
    Soliton(SolitonPayload),
    MomentTest {
        dim: usize,
        samples: usize,
        max_abs_defect: f64,
        /// Defect relative to `‖μ‖²·‖E‖`.
        max_rel_defect: f64,
    },
    Probe {
        transform: String,
        scale: f64,
        tolerance: f64,
        limits: Vec<ProbeLimitPayload>,
        max_deviation: f64,
        dims_agree: bool,
        /// Not asserted for full transformations.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unique: Option<bool>,
    },
    Catalog {
        algebra: AlgebraFile,
    },
}
