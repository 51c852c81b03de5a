use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed group: {0}")]
    MalformedGroup(String),
    #[error("multiplication table has no identity element")]
    MissingIdentity,
    #[error("multiplication table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("invalid element for {group}: {literal}")]
    InvalidElement { group: String, literal: String },
    #[error("ball of radius {radius} exceeds the cardinality cap {cap}")]
    BallTooLarge { radius: u64, cap: usize },
    #[error("operation needs a finite group, got {0}")]
    NotFinite(String),
    #[error("operation needs an infinite group, got {0}")]
    NotInfinite(String),
    #[error("generator is not a bijection of 0..{0}")]
    NotBijective(usize),
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("points of a 3-cycle must be pairwise distinct")]
    NonDistinctPoints,
    #[error("odd permutation {0} is not an element of the glued product")]
    OddPermutation(String),
    #[error("regime error: {0}")]
    Regime(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("map is not an injective homomorphism: {0}")]
    NotEmbedding(String),
    #[error("fiber mismatch: s={from} vs s={to}")]
    FiberMismatch { from: i64, to: i64 },
    #[error("element is outside the window F_{window}")]
    OutsideWindow { window: u64 },
    #[error("quotient injectivity radius {radius} is below the required {required}")]
    InsufficientRadius { radius: u64, required: u64 },
    #[error("no {what} provider for {group}")]
    NoProvider { what: &'static str, group: String },
    #[error("work of {needed} exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}
