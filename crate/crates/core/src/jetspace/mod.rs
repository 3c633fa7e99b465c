//! Jet-space structure: coordinates, contact forms, total derivatives,
//! prolongation of point fields and reduction modulo an equation.

mod ops;
mod spec;

pub use ops::{
    apply_to_equation, contact_forms, on_solution_reduce, on_solution_reduce_all, on_solution_reduce_param, prolong, total_derivative,
    total_derivative_named, Reduction,
};
pub use spec::{JetCoord, JetSpec, PdeSpec};

use thiserror::Error;

use crate::exterior::ExteriorError;
use crate::symkernel::KernelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("invalid jet specification: {0}")]
    BadSpec(String),
    #[error("derivative of {0} along {1} exceeds the chart order")]
    OrderOverflow(String, String),
    #[error("not a point vector field: {0}")]
    NotPointField(String),
    #[error("leading derivative `{0}` does not occur in the equation")]
    LeadingAbsent(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}
