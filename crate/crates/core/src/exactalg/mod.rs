//! Exact scalar, polynomial and jet arithmetic.
//!
//! Everything here is exact: rationals are arbitrary precision, polynomials are
//! sparse with a fixed graded reverse-lexicographic term order, and jets are
//! polynomials in perturbation parameters truncated at a fixed total degree.

mod gaussian;
mod jet;
pub mod linalg;
mod monomial;
mod parse;
mod poly;
mod rational;
pub mod univariate;

pub use gaussian::Gaussian;
pub use jet::{ComplexJet, Jet};
pub use linalg::{exact_rank, independent_rows, Matrix};
pub use monomial::Monomial;
pub use parse::parse_poly;
pub use poly::{monomial_name, roster, Coefficient, Roster, SparsePoly};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse `{0}` as an exact rational (expected `n` or `n/d`)")]
    ParseRational(String),
    #[error("variable rosters differ: [{left}] vs [{right}]")]
    RosterMismatch { left: String, right: String },
    #[error("jet truncation degrees differ: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("cannot truncate a degree-{from} jet to degree {to}")]
    TruncationAbove { from: u32, to: u32 },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}
