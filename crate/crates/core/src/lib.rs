//! Label Cover relaxations over finite rings.
//!
//! The library is organized around LC instances (variables with finite
//! domains and functional constraints `x = alpha(y)`), the translation of
//! CSP instances into that shape, and a family of relaxations solved by
//! exact modular linear algebra:
//!
//! - [`modlin`]: Gaussian elimination over Z_p and Smith normal form over
//!   the integers, the computational engine for everything else.
//! - [`instance`]: the CSP/LC data model, `lc` translation, connectivity,
//!   and the JSON formats.
//! - [`power`]: saturated powers of LC instances and partial-solution
//!   powers of CSP instances.
//! - [`relax`]: arc consistency and the Z_p / Z_n relaxations, including
//!   the level-k pipeline on saturated powers.
//! - [`vectors`]: vector objects over Z_p^N, Gram realization, and the
//!   constructive equivalence between level-k tensor solutions and vector
//!   solutions.
//! - [`rounding`]: the carry polynomial, rounding vector solutions to
//!   Z_{p^2}, and affine decoding of Z_n solutions.
//! - [`dihedral`]: D4 group arithmetic, coset templates, and the
//!   certificate construction for the pair minion over Z_2.
//! - [`oracle`]: brute-force ground truth, the finite no-homomorphism
//!   systems, and seeded instance generators.

pub mod dihedral;
pub mod instance;
pub mod json;
pub mod limits;
pub mod modlin;
pub mod oracle;
pub mod power;
pub mod relax;
pub mod samples;
pub mod rounding;
pub mod vectors;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("power level must be at least 1")]
    LevelZero,
    #[error("size cap exceeded: {0}")]
    SizeCapExceeded(String),
    #[error("search space too large: {0} assignments exceed the cap of {1}")]
    SearchSpaceTooLarge(u128, u64),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("instance is not connected")]
    NotConnected,
    #[error("invalid tensor solution: {0}")]
    InvalidTensor(String),
    #[error("total-symmetry assertion failed during extraction: {0}")]
    SymmetryAssertionFailed(String),
    #[error("rounding requires level k = p, got k = {k}, p = {p}")]
    LevelMismatch { k: usize, p: u64 },
    #[error("residue out of range: {0}")]
    OutOfRange(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("operation requires p = 2 and k = 2, got p = {p}, k = {k}")]
    WrongParameters { p: u64, k: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("recorded minor equality failed verification: {0}")]
    EqualityVerificationFailed(String),
    #[error("invalid vector solution: {0}")]
    InvalidVectorSolution(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
