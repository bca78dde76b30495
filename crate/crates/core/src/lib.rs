//! Exact noncommutative algebra and verification suites for the Racah, Hahn,
//! Bannai–Ito, Askey–Wilson and q-Hahn algebras.

pub mod check;
pub mod cli;
pub mod cliffdiff;
pub mod coefficients;
pub mod fock_oracle;
pub mod ncalg;
pub mod qosc;
pub mod report;
pub mod suites_bi_q;
pub mod suites_classical;
pub mod weyl;

/// Errors surfaced by the engine, the oracle and the suites.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Coeff(#[from] coefficients::CoeffError),
    #[error("elements belong to different algebras: {0}")]
    AlgebraMismatch(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("defining relation violated: {0}")]
    RelationViolated(String),
    #[error("oracle truncation too small: need degree {required}, have {given}")]
    Margin { required: usize, given: usize },
    #[error("no central combination found: {0}")]
    NonCentral(String),
    #[error("identity not in the fitted span ({residual_terms} residual terms): {reason}")]
    Unfitted { residual_terms: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
