//! Exact multivariate polynomial arithmetic over the rationals.

mod monomial;
mod parse;
mod polynomial;

pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_expr, parse_polynomial, tokenize, ParseError, ParseErrorKind, Token, TokenKind, TokenStream};
pub use polynomial::{PolyDisplay, Polynomial};

/// Coefficient field element, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("arity mismatch: {left} variables vs {right}")]
    ArityMismatch { left: usize, right: usize },
}
