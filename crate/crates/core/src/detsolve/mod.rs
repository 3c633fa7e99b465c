//! Symmetry determining systems: form-ideal conditions on the jet space and
//! classical prolongation conditions, both reduced to exact linear algebra.

mod ideal;
mod solve;
mod system;

pub use ideal::{build_ideal, ContactIdeal, EquationForm};
pub use solve::{field_vectors, fields_span_equal, solve_system, verify_symmetry, GeneratorVerdict, SymmetryBasis};
pub use system::{
    assemble_classical, assemble_harrison, ClassicalOptions, Condition, ConditionMode, ConditionSet, DeterminingSystem,
    HarrisonOptions, RowTag, SystemKind, Unknown,
};

use thiserror::Error;

use crate::exterior::ExteriorError;
use crate::jetspace::JetError;
use crate::symkernel::KernelError;

#[derive(Debug, Error)]
pub enum DetError {
    #[error("unsupported problem shape: {0}")]
    UnsupportedShape(String),
    #[error("bad condition set: {0}")]
    BadConditions(String),
    #[error("{0} unknowns exceed the cap of {1}")]
    TooManyUnknowns(usize, usize),
    #[error("prolongation order {0} is below the equation order {1}")]
    OrderTooLow(usize, usize),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[cfg(test)]
mod tests;
