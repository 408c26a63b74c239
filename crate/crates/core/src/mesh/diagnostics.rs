use crate::error::{Error, Result};
use crate::mesh::{edge_lengths, CurvatureField, CurveState, EdgeData, Grid};
use crate::num::{lit, norm_sq, to_f64, Real};

/// Scalar summary of one time level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics<T> {
    pub energy: T,
    pub length: T,
    pub sigma: T,
    /// Squared lumped-L² curvature error against an analytic reference.
    pub err: Option<T>,
    /// Planar curves only.
    pub rotation_index: Option<i64>,
    /// Arclength average of the interpolated monitor (extended scheme only).
    pub monitor: Option<T>,
}

/// Bending and Dirichlet contributions of a piecewise linear curve with
/// lumped curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts<T> {
    /// `½ ∫ I_h(|y|²) |x_u| du`
    pub bending: T,
    /// `½ ∫ |x_u|² du`
    pub dirichlet: T,
    /// `∫ |x_u| du`
    pub length: T,
}

pub fn energy_parts<T: Real>(
    x: &CurveState<T>,
    y: &CurvatureField<T>,
    grid: &Grid<T>,
) -> Result<EnergyParts<T>> {
    if x.len() != grid.len() || y.len() != x.len() || y.dim() != x.dim() {
        return Err(Error::GridMismatch(format!(
            "curve with {} vertices, curvature with {}, grid with {}",
            x.len(),
            y.len(),
            grid.len()
        )));
    }
    let q = edge_lengths(x)?;
    let half = lit::<T>(0.5);
    let mut bending = T::zero();
    let mut dirichlet = T::zero();
    let mut length = T::zero();
    for (k, &qk) in q.iter().enumerate() {
        bending = bending + qk * (norm_sq(y.vertex(k)) + norm_sq(y.vertex(k + 1))) * half;
        dirichlet = dirichlet + qk * qk / grid.width(k);
        length = length + qk;
    }
    Ok(EnergyParts {
        bending: half * bending,
        dirichlet: half * dirichlet,
        length,
    })
}

/// `½ ∫ I_h(|y|²)|x_u| + λ |x_u|² du`, evaluated exactly for piecewise
/// linear `x` and `y`.
pub fn discrete_energy<T: Real>(
    x: &CurveState<T>,
    y: &CurvatureField<T>,
    lambda: T,
    grid: &Grid<T>,
) -> Result<T> {
    let parts = energy_parts(x, y, grid)?;
    Ok(parts.bending + lambda * parts.dirichlet)
}

/// Ratio of the longest to the shortest edge.
pub fn mesh_ratio<T: Real>(edges: &EdgeData<T>) -> T {
    length_ratio(edges.lengths())
}

pub(crate) fn length_ratio<T: Real>(lengths: &[T]) -> T {
    let (lo, hi) = lengths
        .iter()
        .fold((T::infinity(), T::zero()), |(lo, hi), &q| (lo.min(q), hi.max(q)));
    hi / lo
}

/// Total signed turning of the tangent of a planar polygon, in full turns.
pub fn rotation_index<T: Real>(x: &CurveState<T>) -> Result<i64> {
    if x.dim() != 2 {
        return Err(Error::UnsupportedDimension(x.dim()));
    }
    let q = edge_lengths(x)?;
    let n = x.len();
    let tangent = |k: usize| {
        let (a, b) = (x.vertex(k + 1), x.vertex(k));
        let qk = q[k % n];
        [(a[0] - b[0]) / qk, (a[1] - b[1]) / qk]
    };
    let mut total = T::zero();
    for k in 0..n {
        let s = tangent(k);
        let t = tangent(k + 1);
        let cross = s[0] * t[1] - s[1] * t[0];
        let dot = s[0] * t[0] + s[1] * t[1];
        total = total + cross.atan2(dot);
    }
    let turns = total / T::TAU();
    let rounded = turns.round();
    if (turns - rounded).abs() > T::turning_tolerance() {
        return Err(Error::InconsistentRotation {
            turns: to_f64(turns),
        });
    }
    rounded
        .to_i64()
        .ok_or(Error::NonFinite("rotation index"))
}
