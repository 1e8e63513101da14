use thiserror::Error;

use crate::superalg::GeneratorSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("generator set mismatch: {left} vs {right}")]
    GeneratorMismatch { left: GeneratorSet, right: GeneratorSet },

    #[error("momentum basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("degree violation: {0}")]
    Degree(String),

    #[error("invalid structure data: {0}")]
    InvalidSpec(String),

    #[error("operation needs a connection but none was provided")]
    MissingConnection,

    #[error("psi component is nonzero; L is not a Dirac structure")]
    PsiNonzero,

    #[error("cochain is not closed: d_L eta = {0}")]
    NotClosed(String),

    #[error("master equation fails: {0}")]
    MasterFailed(String),

    #[error("not a valid first-order deformation: d_L omega1 = {0}")]
    InvalidFirstOrder(String),

    #[error("deformation state is only verified through order {verified}, need order {needed}")]
    StateNotVerified { verified: usize, needed: usize },

    #[error("obstruction class failed closedness check: d_L R = {0}")]
    ClosednessViolated(String),

    #[error("not a Poisson model: {0}")]
    NotPoisson(String),

    #[error("spec file error: {0}")]
    SpecFile(String),
}
