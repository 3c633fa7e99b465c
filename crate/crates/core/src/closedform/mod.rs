//! Elementary-function expressions, explicit KdV solution families, symmetry
//! flows on solutions and residual checks.

mod expr;
mod families;
mod residual;

pub use expr::{EvalError, Expr, Func, SINGULAR_EPS};
pub use families::{apply_flow, family, soliton_profile, FamilyKind, FamilyParams, Flow, Variant};
pub use residual::{
    kdv_residual, residual_exact, residual_exact_rational, residual_numeric, standard_profile_points, traveling_wave_check, tx_chart,
    Grid, ResidualReport, SingularPolicy, TravelingWaveReport,
};

use thiserror::Error;

use crate::symkernel::KernelError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosedFormError {
    #[error("singular value")]
    Singular,
    #[error("singular at (t, x) = ({0}, {1})")]
    SingularAt(f64, f64),
    #[error("argument outside the function domain")]
    Domain,
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("exponent must be a constant")]
    NonConstantExponent,
    #[error("unknown function {0}")]
    UnknownFunction(String),
    #[error("not rational: {0}")]
    NotRational(String),
    #[error("unknown parameter {0}")]
    UnknownParameter(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("bad grid '{0}'")]
    BadGrid(String),
    #[error("chart lacks coordinate {0}")]
    MissingCoordinate(&'static str),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
