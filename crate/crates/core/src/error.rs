use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated its documented range.
    #[error("invalid {field} = {value}: expected {expected}")]
    InvalidParameter {
        field: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("exact integer overflow computing C_{n}")]
    Overflow { n: usize },

    #[error("argument {value} outside domain {domain}")]
    Domain { value: String, domain: &'static str },

    #[error("singular denominator in closed form at t = {t}, x = {x} (|D| = {magnitude:e})")]
    Singularity { t: f64, x: f64, magnitude: f64 },

    #[error("matrix pivot {pivot:e} below threshold {threshold:e}; reduce the step")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("imaginary residue {residue:e} exceeds {threshold:e}")]
    ResidueExceeded { residue: f64, threshold: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty or ragged table: {0}")]
    Table(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, value: impl ToString, expected: &'static str) -> Self {
        Error::InvalidParameter {
            field,
            value: value.to_string(),
            expected,
        }
    }
}
