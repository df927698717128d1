use std::path::PathBuf;

use thiserror::Error;

/// Exit code for invalid input: malformed files, bad flags, algebras the
/// requested operation does not accept.
pub const EXIT_VALIDATION: u8 = 2;
/// Exit code for failures of the numerics on valid input.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error{}{}: {message}", location(*.line, *.column), field.as_deref().map(|f| format!(" in `{f}`")).unwrap_or_default())]
    Parse {
        line: Option<usize>,
        column: Option<usize>,
        field: Option<String>,
        message: String,
    },
    #[error("bad metric: {0}")]
    BadMetric(String),
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("plot: {0}")]
    Plot(String),
    #[error("emit: {0}")]
    Emit(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] hcf_core::Error),
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l}, column {c}"),
        (Some(l), None) => format!(" at line {l}"),
        _ => String::new(),
    }
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse {
            line: None,
            column: None,
            field: Some(field.into()),
            message: message.into(),
        }
    }

    /// Stable identifier printed with every failure.
    pub fn code(&self) -> &'static str {
        use hcf_core::Error as E;
        match self {
            CliError::Parse { .. } => "E_PARSE",
            CliError::BadMetric(_) => "E_BAD_METRIC",
            CliError::Usage(_) => "E_USAGE",
            CliError::Io { .. } => "E_IO",
            CliError::Csv(_) => "E_CSV",
            CliError::Plot(_) => "E_PLOT",
            CliError::Emit(_) => "E_EMIT",
            CliError::Json(_) => "E_JSON",
            CliError::Core(e) => match e {
                E::JacobiViolation { .. } => "E_JACOBI",
                E::NotTwoStep => "E_NOT_TWO_STEP",
                E::DimensionMismatch { .. } => "E_DIMENSION",
                E::SingularMatrix { .. } => "E_SINGULAR",
                E::NotPositiveDefinite { .. } => "E_NOT_POSITIVE_DEFINITE",
                E::BadSupport { .. } => "E_BAD_SUPPORT",
                E::BadParameter(_) => "E_BAD_PARAMETER",
                E::ZeroBracket => "E_ZERO_BRACKET",
                E::NotUnitNorm { .. } => "E_NOT_UNIT_NORM",
                E::NonFinite => "E_NON_FINITE",
                E::StepFailure { .. } => "E_STEP_FAILURE",
                E::StructureDrift { .. } => "E_STRUCTURE_DRIFT",
                E::DecayLawViolation { .. } => "E_DECAY_LAW",
                E::NoConvergence { .. } => "E_NO_CONVERGENCE",
                E::NotFixedPoint { .. } => "E_NOT_FIXED_POINT",
                E::NonReal { .. } => "E_NON_REAL",
            },
        }
    }

    /// 3 for numerical failures, 2 for everything caused by the request itself
    /// (including unreadable inputs and unwritable output directories).
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if !e.is_validation() => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
