use std::path::PathBuf;

/// Errors produced anywhere in the metric, evaluation or manifest layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot decode {path}: {message}")]
    Decode { path: PathBuf, message: String },

    /// Reference and distorted inputs differ in size. Dimensions are `(width, height)`.
    #[error("shape mismatch: reference is {}x{}, distorted is {}x{}", .reference.0, .reference.1, .distorted.0, .distorted.1)]
    ShapeMismatch {
        reference: (usize, usize),
        distorted: (usize, usize),
    },

    #[error("invalid dimensions: {0}")]
    Dimension(String),

    #[error("empty input")]
    EmptyInput,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("logistic fit diverged: {0}")]
    FitDiverged(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("entry {index} has no distortion label")]
    MissingLabel { index: usize },

    #[error("{failed} of {total} entries failed; aborting (limit is 10%)")]
    TooManyFailures { failed: usize, total: usize },

    #[error("config error on line {line}: {message}")]
    Config { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
