use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u32, modulus: u32 },

    #[error("modulus {modulus} exceeds the enumeration cap {cap}")]
    CapExceeded { modulus: u32, cap: u32 },

    #[error("enumeration needs {required} candidates but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("operands live in different rings (mod {left} vs mod {right})")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("invalid set description: {0}")]
    InvalidSpec(String),

    #[error("tuple outside the map domain: {0}")]
    DomainViolation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("formula {formula} did not evaluate to a nonnegative integer")]
    InexactResult { formula: String },

    #[error("inexact division in {0}")]
    InexactDivision(String),

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("prime {0} repeats in a product that must be squarefree")]
    NonSquarefree(u64),

    #[error("odd part of {0} is not squarefree")]
    NonSquarefreeOddPart(u64),

    #[error("count overflowed the accumulator type")]
    CountOverflow,
}
