//! Exact arithmetic: rationals, sparse polynomials, rational functions and
//! parameter-linear polynomials over a named coordinate chart.

pub mod chart;
pub mod parampoly;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scalar;

pub use chart::{Chart, CoordChart, CoordKind};
pub use parampoly::{AffineForm, ParamId, ParamPoly, ParamRegistry};
pub use parse::{parse_ast, parse_poly, parse_ratfunc, Ast};
pub use poly::{Monomial, Poly};
pub use ratfunc::{ratfunc_equal, RatFunc};
pub use scalar::Scalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("chart mismatch: {0} vs {1}")]
    ChartMismatch(String, String),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("duplicate coordinate `{0}`")]
    DuplicateCoordinate(String),
    #[error("invalid coordinate name `{0}`")]
    BadName(String),
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("not a polynomial: {0}")]
    NonPolynomial(String),
    #[error("division by zero")]
    ZeroDenominator,
    #[error("product of two parameter-dependent terms is not linear")]
    NonLinearParameters,
}
