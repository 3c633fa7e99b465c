//! Exterior algebra over a coordinate chart: wedge, `d`, interior product and
//! Lie derivatives of differential forms, plus vector fields and brackets.

mod coeff;
mod field;
mod form;
mod parse;

pub use coeff::Coeff;
pub use field::VectorField;
pub use form::{canonicalize, proportionality_test, DiffForm};
pub use parse::{parse_field, parse_form, parse_poly_field};

use thiserror::Error;

use crate::symkernel::KernelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExteriorError {
    #[error("forms or fields live on different charts")]
    ChartMismatch,
    #[error("grade mismatch: {0} vs {1}")]
    GradeMismatch(usize, usize),
    #[error("interior product of a 0-form")]
    InteriorOfFunction,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("component {0} is not in the rendering basis")]
    BasisIncomplete(String),
    #[error("form parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
