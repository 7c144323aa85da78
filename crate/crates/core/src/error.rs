use thiserror::Error;

use crate::linprog::LpError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("degenerate affine map (|det| = {det:e})")]
    DegenerateMap { det: f64 },

    #[error("invalid diversity: {0}")]
    InvalidDiversity(String),

    #[error("label mismatch between diversities")]
    LabelMismatch,

    #[error("diversity is not symmetric: subsets {first:?} and {second:?} differ")]
    NotSymmetric {
        first: Vec<String>,
        second: Vec<String>,
    },

    #[error("diversity is not a diameter diversity (subset {subset:?})")]
    NotDiameter { subset: Vec<String> },

    #[error("input is not a semimetric: {0}")]
    NotSemimetric(String),

    #[error("combinatorial budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error("criterion fails: {0}")]
    CriterionFails(String),

    #[error("embedding verification failed on {subset:?}: expected {expected}, got {got}")]
    VerificationFailed {
        subset: Vec<String>,
        expected: f64,
        got: f64,
    },

    #[error("linear program failed: {0}")]
    Lp(#[from] LpError),

    #[error("solver did not reach an optimum: {0}")]
    SolverStatus(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error documents.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NonFinite(_) => "non_finite",
            Error::Empty(_) => "empty_input",
            Error::InvalidPointSet(_) => "invalid_point_set",
            Error::InvalidKernel(_) => "invalid_kernel",
            Error::DegenerateMap { .. } => "degenerate_map",
            Error::InvalidDiversity(_) => "invalid_diversity",
            Error::LabelMismatch => "label_mismatch",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::NotDiameter { .. } => "not_diameter",
            Error::NotSemimetric(_) => "not_semimetric",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::PreconditionUnmet(_) => "precondition_unmet",
            Error::CriterionFails(_) => "criterion_fails",
            Error::VerificationFailed { .. } => "verification_failed",
            Error::Lp(_) => "lp_failure",
            Error::SolverStatus(_) => "solver_status",
            Error::Parse(_) => "parse_error",
            Error::Io(_) => "io_error",
        }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
