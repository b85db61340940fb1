use thiserror::Error;

/// Errors raised by the exact kernels and the counting pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial is identically zero")]
    IdenticallyZero,
    #[error("degree must be positive")]
    NonPositiveDegree,
    #[error("not square-free")]
    NotSquareFree,
    #[error("reducible")]
    Reducible,
    #[error("common component")]
    CommonComponent,
    #[error("degenerate axis: {0}")]
    DegenerateAxis(String),
    #[error("linear dependence on curve (W_{0} vanishes identically on the curve)")]
    LinearDependenceOnCurve(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certification failure: {0}")]
    CertificationFailure(String),
    #[error("certificate violated: {0}")]
    CertificateViolated(String),
    #[error("guardrail refusal: {0}")]
    Guardrail(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate point in input: {0}")]
    DuplicatePoint(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CertificateViolated(_) | Error::CertificationFailure(_) => 3,
            Error::Guardrail(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
