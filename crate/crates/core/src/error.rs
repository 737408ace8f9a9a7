use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("file not found: {path}")]
    FileNotFound { path: PathBuf },

    #[error("unsupported format for {path}: {reason}")]
    UnsupportedFormat { path: PathBuf, reason: String },

    #[error("malformed header in {path}: {reason}")]
    MalformedHeader { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("wrong color space: expected {expected}, found {found}")]
    WrongColorSpace { expected: String, found: String },

    #[error("dimension mismatch: {a_width}x{a_height} vs {b_width}x{b_height}")]
    DimensionMismatch {
        a_width: usize,
        a_height: usize,
        b_width: usize,
        b_height: usize,
    },

    #[error("invalid parameter: {reason}")]
    InvalidParams { reason: String },

    #[error("inverse transform left an imaginary residue of {residual:.3e} (limit {limit:.3e}); filter is not conjugate-symmetric")]
    ResidualImaginaryTooLarge { residual: f64, limit: f64 },

    #[error("too many decomposition levels: 2^{levels} exceeds min dimension {min_dim}")]
    TooManyLevels { levels: usize, min_dim: usize },

    #[error("pyramid inconsistent with filter bank: {reason}")]
    BankMismatch { reason: String },

    #[error("invalid edge thresholds: low {low} must satisfy 0 <= low <= high {high}")]
    InvalidThresholds { low: f64, high: f64 },

    #[error("config error{}: {reason}", line.map(|n| format!(" (line {n})")).unwrap_or_default())]
    Config { line: Option<usize>, reason: String },

    #[error("stage '{stage}' failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn in_stage(self, stage: &str) -> Error {
        Error::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }

    /// Exit code the CLI maps this error to: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
