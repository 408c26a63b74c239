//! Direct solution of the per-step systems.

mod lu;
mod sparse;

pub use lu::{compensated_residual, scaled_residual, solve_checked, Factorization, FillStats, REFINEMENT_SWEEPS};
pub use sparse::{SparseMatrix, TripletBuilder};

use crate::error::Result;
use crate::mesh::{CurvatureField, CurveState};
use crate::num::Real;
use crate::scheme::LinearSystem;

/// Solves the step system and splits the solution into `(x^{m+1}, y^{m+1})`.
pub fn solve<T: Real>(sys: &LinearSystem<T>) -> Result<(CurveState<T>, CurvatureField<T>)> {
    let z = solve_vector(sys)?;
    sys.unpack(&z)
}

/// Raw solution vector in the system's unknown layout.
pub fn solve_vector<T: Real>(sys: &LinearSystem<T>) -> Result<Vec<T>> {
    solve_checked(&sys.matrix, &sys.rhs, &sys.column_order())
}
