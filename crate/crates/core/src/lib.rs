//! Exact symmetry analysis of differential equations on jet spaces.
//!
//! The crate covers the whole pipeline for the Korteweg-de Vries equation
//! `u_t + u u_x + u_xxx = 0`: the contact ideal of differential forms, the
//! form-ideal (Harrison-Estabrook) and classical prolongation determining
//! systems, the Lie algebra of the solved generators, residual checks of the
//! explicit solution families, and first integrals of integrable distributions.

pub mod closedform;
pub mod detsolve;
pub mod exterior;
pub mod integrable;
pub mod jetspace;
pub mod liealg;
pub mod par;
pub mod ratlinalg;
pub mod symkernel;
