use crate::error::{Error, Result};
use crate::mesh::{CurvatureField, CurveState, EdgeData, Grid};
use crate::num::{lit, Real};

/// Discrete curvature of the initial polygon,
/// `y_j = 2 (τ_{j} - τ_{j-1}) / (q_{j-1} + q_j)` with edge `j` leaving vertex `j`.
///
/// The curvature equation has a lumped (diagonal) mass, so this is its exact
/// solution and no linear solve is needed.
pub fn init_curvature<T: Real>(x0: &CurveState<T>, grid: &Grid<T>) -> Result<CurvatureField<T>> {
    if grid.len() != x0.len() {
        return Err(Error::GridMismatch(format!(
            "curve with {} vertices on a grid with {}",
            x0.len(),
            grid.len()
        )));
    }
    let n = x0.len();
    let dim = x0.dim();
    let edges = EdgeData::new(x0, &CurvatureField::zeros(dim, n))?;
    let two = lit::<T>(2.0);
    let mut coords = Vec::with_capacity(n * dim);
    for j in 0..n {
        let left = (j + n - 1) % n;
        let scale = two / (edges.length(left) + edges.length(j));
        for (&out, &inc) in edges.tangent(j).iter().zip(edges.tangent(left)) {
            coords.push(scale * (out - inc));
        }
    }
    CurvatureField::new(dim, coords)
}
