use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generator index {index} out of range for {generators} generators")]
    UnknownGenerator { index: usize, generators: usize },

    #[error("relator {0} is not freely reduced")]
    NotReduced(usize),

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subspace is not invariant under the action")]
    NotInvariant,

    #[error("enumeration bound exceeded: {needed} > {bound}")]
    BoundExceeded { needed: u128, bound: u128 },

    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),

    #[error("arithmetic overflow while evaluating {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
