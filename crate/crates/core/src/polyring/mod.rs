//! Weighted graded polynomial rings over `Q(i)`.

mod parse;
mod poly;
mod ring;

use thiserror::Error;

pub use parse::parse_poly;
pub use poly::{variable_map, GradedPoly};
pub use ring::{Exponent, GradedPiece, WeightedRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("duplicate variable '{0}'")]
    DuplicateVariable(String),
    #[error("variable '{0}' already present in the ring")]
    VariableCollision(String),
    #[error("invalid variable name '{0}'")]
    InvalidVariableName(String),
    #[error("variable '{0}' must have positive weight")]
    NonPositiveWeight(String),
    #[error("variable '{0}' has different weights in the two rings")]
    WeightMismatch(String),
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}
