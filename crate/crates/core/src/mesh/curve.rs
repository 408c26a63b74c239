use crate::error::{Error, Result};
use crate::num::Real;

/// Nodal positions `x_0, ..., x_{N-1}` of a closed polygon in `R^n`, stored
/// vertex-major, together with the time level they belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveState<T> {
    dim: usize,
    pub t: T,
    coords: Vec<T>,
}

/// Nodal discrete curvature vectors `y_0, ..., y_{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField<T> {
    dim: usize,
    coords: Vec<T>,
}

fn check_layout<T: Real>(dim: usize, coords: &[T], what: &'static str) -> Result<()> {
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if !coords.len().is_multiple_of(dim) {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates do not split into {dim}-vectors",
            coords.len()
        )));
    }
    if coords.len() / dim < 3 {
        return Err(Error::InvalidGrid(format!(
            "a closed polygon needs at least 3 vertices, got {}",
            coords.len() / dim
        )));
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite(what));
    }
    Ok(())
}

macro_rules! nodal_accessors {
    () => {
        pub fn dim(&self) -> usize {
            self.dim
        }

        /// Number of vertices.
        pub fn len(&self) -> usize {
            self.coords.len() / self.dim
        }

        pub fn is_empty(&self) -> bool {
            self.coords.is_empty()
        }

        /// Vector at vertex `j`, taken cyclically.
        pub fn vertex(&self, j: usize) -> &[T] {
            let j = j % self.len();
            &self.coords[j * self.dim..(j + 1) * self.dim]
        }

        pub fn vertex_mut(&mut self, j: usize) -> &mut [T] {
            let j = j % self.len();
            &mut self.coords[j * self.dim..(j + 1) * self.dim]
        }

        pub fn iter(&self) -> std::slice::ChunksExact<'_, T> {
            self.coords.chunks_exact(self.dim)
        }

        /// Flat vertex-major coordinates.
        pub fn as_slice(&self) -> &[T] {
            &self.coords
        }
    };
}

impl<T: Real> CurveState<T> {
    pub fn new(dim: usize, t: T, coords: Vec<T>) -> Result<Self> {
        check_layout(dim, &coords, "curve positions")?;
        Ok(CurveState { dim, t, coords })
    }

    pub fn from_points<P: AsRef<[T]>>(t: T, points: &[P]) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.as_ref().len());
        if points.iter().any(|p| p.as_ref().len() != dim) {
            return Err(Error::DimensionMismatch(
                "points have differing dimensions".into(),
            ));
        }
        let coords = points.iter().flat_map(|p| p.as_ref().iter().copied()).collect();
        Self::new(dim, t, coords)
    }

    nodal_accessors!();

    /// Applies `x ↦ Q x + b` to every vertex (`q` row-major `n × n`).
    pub fn transformed(&self, q: &[T], b: &[T]) -> Self {
        let mut out = self.clone();
        for (dst, src) in out.coords.chunks_exact_mut(self.dim).zip(self.iter()) {
            apply_affine(q, b, src, dst);
        }
        out
    }

    /// Returns a copy scaled by `c` about the origin.
    pub fn scaled(&self, c: T) -> Self {
        let mut out = self.clone();
        out.coords.iter_mut().for_each(|v| *v = *v * c);
        out
    }

    /// Relabels vertices so that vertex `shift` becomes vertex 0.
    pub fn rotated_labels(&self, shift: usize) -> Self {
        let mut out = self.clone();
        out.coords.rotate_left((shift % self.len()) * self.dim);
        out
    }
}

impl<T: Real> CurvatureField<T> {
    pub fn new(dim: usize, coords: Vec<T>) -> Result<Self> {
        check_layout(dim, &coords, "curvature field")?;
        Ok(CurvatureField { dim, coords })
    }

    pub fn zeros(dim: usize, len: usize) -> Self {
        CurvatureField {
            dim,
            coords: vec![T::zero(); dim * len],
        }
    }

    nodal_accessors!();

    /// Applies the linear map `y ↦ Q y` to every vertex.
    pub fn rotated(&self, q: &[T]) -> Self {
        let zero = vec![T::zero(); self.dim];
        let mut out = self.clone();
        for (dst, src) in out.coords.chunks_exact_mut(self.dim).zip(self.iter()) {
            apply_affine(q, &zero, src, dst);
        }
        out
    }

    pub fn rotated_labels(&self, shift: usize) -> Self {
        let mut out = self.clone();
        out.coords.rotate_left((shift % self.len()) * self.dim);
        out
    }
}

fn apply_affine<T: Real>(q: &[T], b: &[T], src: &[T], dst: &mut [T]) {
    let n = src.len();
    for r in 0..n {
        dst[r] = (0..n).fold(b[r], |acc, c| acc + q[r * n + c] * src[c]);
    }
}
