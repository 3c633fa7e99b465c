//! Distributions described by annihilating 1-forms: Frobenius tests,
//! symmetries, integrating factors and numerically evaluated first integrals.

mod distribution;
mod kdv;
mod quadrature;
mod ratmat;

pub use distribution::{frobenius_1form, generic_rank, involutivity, sym_of_distribution, z_matrix, Distribution, ZReport};
pub use kdv::{kdv_first_integral, radicand, TURNING_Q, yv_chart, Branch, KdvFirstIntegral, KdvFirstIntegralOptions};
pub use quadrature::{adaptive_simpson, first_integral_numeric, FirstIntegralSpec, PathPlan};
pub use ratmat::{inverse as ratfunc_inverse, solve as ratfunc_solve};

use thiserror::Error;

use crate::exterior::ExteriorError;

#[derive(Debug, Error)]
pub enum IntegrableError {
    #[error("expected a 1-form, got grade {0}")]
    WrongGrade(usize),
    #[error("forms are linearly dependent")]
    Dependent,
    #[error("form {0} does not annihilate field {1}")]
    NotAnnihilating(usize, usize),
    #[error("need as many fields as forms ({0} vs {1})")]
    NotSquare(usize, usize),
    #[error("Z is singular")]
    SingularZ,
    #[error("form is not closed")]
    NotClosed,
    #[error("point has {0} coordinates, chart has {1}")]
    PointDimension(usize, usize),
    #[error("singular integrand near {0}")]
    SingularOnPath(f64),
    #[error("radicand is not positive at v0 = {0}")]
    RadicandNonPositive(f64),
    #[error("an initial value is required when c1 or c2 is nonzero")]
    MissingInitialValue,
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

#[cfg(test)]
mod tests;
