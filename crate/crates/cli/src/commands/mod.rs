mod integrable;
mod lie;
mod solution;
mod solve;

pub use integrable::{first_integral, frobenius};
pub use lie::{brackets, solvable};
pub use solution::{check_solution, flow};
pub use solve::{prolong, reduce_check, solve_classical, solve_harrison, verify_symmetry};
