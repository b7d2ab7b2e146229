use thiserror::Error;

/// Series variable named in precision errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    T,
}

impl std::fmt::Display for Var {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Var::U => f.write_str("u"),
            Var::T => f.write_str("t"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {0} exceeds the supported table size")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("insufficient precision in {var}: {detail}")]
    InsufficientPrecision { var: Var, detail: String },
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("polynomial is reducible; factors: {}", .0.join(", "))]
    Reducible(Vec<String>),
    #[error("curve {curve} is singular at {point}")]
    Singular { curve: String, point: String },
    #[error("point {point} does not lie on {curve}")]
    NotOnCurve { curve: String, point: String },
    #[error("curves share the component {0}; move to a general-position representative")]
    CommonComponent(String),
    #[error("incomplete curve list: polar component {0} passes through the point")]
    IncompleteCurves(String),
    #[error("flag list misses a nonzero symbol at {0}")]
    MissingFlags(String),
    #[error("residue {value} at {point} outside the candidate support")]
    UnexpectedResidue { point: String, value: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("window: {0}")]
    Window(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precision(var: Var, detail: impl Into<String>) -> Error {
    Error::InsufficientPrecision {
        var,
        detail: detail.into(),
    }
}
