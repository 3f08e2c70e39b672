//! Exact-arithmetic engine for weight multiplicities of basic representations
//! of affine ADE Lie algebras and for the singular-parameter arrangements of
//! wreath-product symplectic reflection algebras.
//!
//! Everything is computed over arbitrary-precision integers and rationals;
//! there is no floating point anywhere in this crate.

pub mod arrangement;
pub mod exactmat;
pub mod mckay;
pub mod multiplicity;
pub mod partitions;
pub mod predictions;
pub mod weights;

pub use num_bigint::BigUint;

use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix has deficient rank: {0}")]
    RankDeficient(String),
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("operation undefined for the trivial group")]
    TrivialGroup,
    #[error("invalid parameter face: {0}")]
    InvalidFace(String),
    #[error("invalid weight data: {0}")]
    InvalidWeight(String),
    #[error("root closure inconclusive at window {window}: {detail}")]
    InconclusiveClosure { window: i64, detail: String },
    #[error("depth budget exhausted: need {needed}, budget {budget}")]
    DepthExhausted { needed: u64, budget: u64 },
    #[error("unsupported parameter regime: {0}")]
    UnsupportedRegime(String),
    #[error("branching produced a negative residual at {0}")]
    NegativeResidual(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
