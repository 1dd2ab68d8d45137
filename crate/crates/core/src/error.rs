use alloc::string::String;

use crate::model::SwapInstance;

/// Errors produced by the engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid class parameters: {0}")]
    InvalidSpec(String),
    #[error("invalid outcome: {0}")]
    InvalidOutcome(String),
    #[error("invalid CPT for variable {variable}: {reason}")]
    InvalidCpt { variable: usize, reason: String },
    #[error("dependency graph has a cycle")]
    Cyclic,
    #[error("outcomes do not form a swap")]
    NotASwap,
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("net is not maximal in its class")]
    NotMaximal,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("oracle answers are contradictory: {0}")]
    OracleContradiction(String),
    #[error("binary search found no parent")]
    NoParentFound,
    #[error("universal set does not have the required strength")]
    UniversalSetTooWeak,
    #[error("majority vote tied")]
    MajorityTie,
    #[error("oracle answered unknown where a label is required")]
    UnexpectedUnknown,
    #[error("waiting for an answer to a query")]
    AwaitingAnswer(SwapInstance),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
