use crate::error::{Error, Result};
use crate::linsolve::SparseMatrix;
use crate::mesh::{CurvatureField, CurveState};
use crate::num::Real;

/// One time step's coupled system for `(x^{m+1}, y^{m+1})`.
///
/// Unknowns are ordered `[x_0, ..., x_{N-1}, y_0, ..., y_{N-1}]`, each entry
/// an `n`-vector; rows follow the same layout (position equations first).
#[derive(Debug, Clone)]
pub struct LinearSystem<T> {
    pub(crate) vertices: usize,
    pub(crate) dim: usize,
    /// Time level of the unknowns.
    pub(crate) time: T,
    pub matrix: SparseMatrix<T>,
    pub rhs: Vec<T>,
}

impl<T: Real> LinearSystem<T> {
    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn time(&self) -> T {
        self.time
    }

    /// `2 N n`.
    pub fn size(&self) -> usize {
        2 * self.vertices * self.dim
    }

    #[inline]
    pub fn x_index(&self, vertex: usize, component: usize) -> usize {
        x_index(self.vertices, self.dim, vertex, component)
    }

    #[inline]
    pub fn y_index(&self, vertex: usize, component: usize) -> usize {
        y_index(self.vertices, self.dim, vertex, component)
    }

    /// Elimination order that visits the unknowns vertex by vertex, which
    /// turns the cyclic coupling into a bordered band.
    pub fn column_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.size());
        for j in 0..self.vertices {
            order.extend((0..self.dim).map(|c| self.x_index(j, c)));
            order.extend((0..self.dim).map(|c| self.y_index(j, c)));
        }
        order
    }

    /// Stacks a state pair into the unknown layout.
    pub fn pack(&self, x: &CurveState<T>, y: &CurvatureField<T>) -> Vec<T> {
        let mut z = x.as_slice().to_vec();
        z.extend_from_slice(y.as_slice());
        z
    }

    /// Splits a solution vector into the new curve and curvature.
    pub fn unpack(&self, z: &[T]) -> Result<(CurveState<T>, CurvatureField<T>)> {
        if z.len() != self.size() {
            return Err(Error::DimensionMismatch(format!(
                "solution of length {} for a system of size {}",
                z.len(),
                self.size()
            )));
        }
        let half = self.vertices * self.dim;
        let x = CurveState::new(self.dim, self.time, z[..half].to_vec())?;
        let y = CurvatureField::new(self.dim, z[half..].to_vec())?;
        Ok((x, y))
    }
}

#[inline]
pub(crate) fn x_index(vertices: usize, dim: usize, vertex: usize, component: usize) -> usize {
    (vertex % vertices) * dim + component
}

#[inline]
pub(crate) fn y_index(vertices: usize, dim: usize, vertex: usize, component: usize) -> usize {
    (vertices + vertex % vertices) * dim + component
}
