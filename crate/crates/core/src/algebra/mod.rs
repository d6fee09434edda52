//! Exact coefficient arithmetic, monomials and multivariate polynomials.

mod field;
mod monomial;
mod polynomial;

pub use field::{is_prime, FieldSpec, Scalar};
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use polynomial::{poly_arith, ArithOp, PolyRing, Polynomial, Term};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("characteristic {0} is neither 0 nor a prime")]
    NotAPrime(u64),
    #[error("operands live in different polynomial rings")]
    RingMismatch,
    #[error("expected {expected} entries, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable `{0}` is listed twice")]
    DuplicateVariable(String),
    #[error("`{0}` is not a valid variable name")]
    InvalidVariableName(String),
}
