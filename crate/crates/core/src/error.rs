use thiserror::Error;

use crate::numerics::{Interval, Rational};
use crate::transc::ElemFn;

pub type Result<T> = std::result::Result<T, Error>;

/// Machine-readable reason attached to a non-certified verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReasonCode {
    ResidualNegative,
    BoundExceedsGamma,
    MalformedNumber,
    DivisionByZeroPoly,
    PrecondViolation,
    SinCosErrorTooLarge,
    NotSquarefree,
    DegreeTooSmall,
    EndpointZero,
    OracleDepthExceeded,
    ZeroValidationFailed,
    ParseError,
    MultipleVariables,
    UnknownFunction,
    InvertedInterval,
    InvalidCertificate,
}

impl ReasonCode {
    pub const ALL: [ReasonCode; 16] = [
        ReasonCode::ResidualNegative,
        ReasonCode::BoundExceedsGamma,
        ReasonCode::MalformedNumber,
        ReasonCode::DivisionByZeroPoly,
        ReasonCode::PrecondViolation,
        ReasonCode::SinCosErrorTooLarge,
        ReasonCode::NotSquarefree,
        ReasonCode::DegreeTooSmall,
        ReasonCode::EndpointZero,
        ReasonCode::OracleDepthExceeded,
        ReasonCode::ZeroValidationFailed,
        ReasonCode::ParseError,
        ReasonCode::MultipleVariables,
        ReasonCode::UnknownFunction,
        ReasonCode::InvertedInterval,
        ReasonCode::InvalidCertificate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReasonCode::ResidualNegative => "residual_negative",
            ReasonCode::BoundExceedsGamma => "bound_exceeds_gamma",
            ReasonCode::MalformedNumber => "malformed_number",
            ReasonCode::DivisionByZeroPoly => "division_by_zero_poly",
            ReasonCode::PrecondViolation => "precond_violation",
            ReasonCode::SinCosErrorTooLarge => "sin_cos_error_too_large",
            ReasonCode::NotSquarefree => "not_squarefree",
            ReasonCode::DegreeTooSmall => "degree_too_small",
            ReasonCode::EndpointZero => "endpoint_zero",
            ReasonCode::OracleDepthExceeded => "oracle_depth_exceeded",
            ReasonCode::ZeroValidationFailed => "zero_validation_failed",
            ReasonCode::ParseError => "parse_error",
            ReasonCode::MultipleVariables => "multiple_variables",
            ReasonCode::UnknownFunction => "unknown_function",
            ReasonCode::InvertedInterval => "inverted_interval",
            ReasonCode::InvalidCertificate => "invalid_certificate",
        }
    }

    pub fn parse(s: &str) -> Option<ReasonCode> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl std::fmt::Display for ReasonCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed number literal `{0}`")]
    MalformedNumber(String),

    #[error("polynomial division by the zero polynomial")]
    DivisionByZeroPoly,

    #[error("precondition of {func} violated on {range}: {reason}")]
    PrecondViolation {
        func: ElemFn,
        range: Interval,
        reason: String,
    },

    #[error("propagated error {error} into {func} exceeds the pi/2 guard {limit}")]
    SinCosErrorTooLarge {
        func: ElemFn,
        error: Rational,
        limit: Rational,
    },

    #[error("polynomial is not squarefree (zero remainder in Sturm chain); shrink or perturb the interval, or use a different approximation")]
    NotSquarefree,

    #[error("Sturm chain needs a polynomial of degree >= 1")]
    DegreeTooSmall,

    #[error("polynomial vanishes at interval endpoint {at}; perturb the interval bound (e.g. use 0.003 instead of 0)")]
    EndpointZero { at: Rational },

    #[error("root isolation exceeded the maximum bisection depth {depth}; increase --max-depth or supply zero hints")]
    OracleDepthExceeded { depth: u32 },

    #[error("zero validation failed{}: {reason}", .index.map(|i| format!(" at interval #{i}")).unwrap_or_default())]
    ZeroValidationFailed {
        index: Option<usize>,
        reason: String,
    },

    #[error("parse error at {line}:{col}: expected {expected}")]
    Parse {
        line: usize,
        col: usize,
        expected: String,
    },

    #[error("expression uses more than one variable: {}", .0.join(", "))]
    MultipleVariables(Vec<String>),

    #[error("unknown or unsupported function `{0}`")]
    UnknownFunction(String),

    #[error("inverted interval on line {line}: lower bound exceeds upper bound")]
    InvertedInterval { line: usize },

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
}

impl Error {
    pub fn code(&self) -> ReasonCode {
        match self {
            Error::MalformedNumber(_) => ReasonCode::MalformedNumber,
            Error::DivisionByZeroPoly => ReasonCode::DivisionByZeroPoly,
            Error::PrecondViolation { .. } => ReasonCode::PrecondViolation,
            Error::SinCosErrorTooLarge { .. } => ReasonCode::SinCosErrorTooLarge,
            Error::NotSquarefree => ReasonCode::NotSquarefree,
            Error::DegreeTooSmall => ReasonCode::DegreeTooSmall,
            Error::EndpointZero { .. } => ReasonCode::EndpointZero,
            Error::OracleDepthExceeded { .. } => ReasonCode::OracleDepthExceeded,
            Error::ZeroValidationFailed { .. } => ReasonCode::ZeroValidationFailed,
            Error::Parse { .. } => ReasonCode::ParseError,
            Error::MultipleVariables(_) => ReasonCode::MultipleVariables,
            Error::UnknownFunction(_) => ReasonCode::UnknownFunction,
            Error::InvertedInterval { .. } => ReasonCode::InvertedInterval,
            Error::InvalidCertificate(_) => ReasonCode::InvalidCertificate,
        }
    }
}
