use crate::error::{Error, Result};
use crate::num::{from_usize, lit, Real};

/// Periodic partition `0 = u_0 < u_1 < ... < u_N = 2π` of the parameter domain.
///
/// Element `k` is `[u_k, u_{k+1}]` and has width `widths()[k]`; it carries
/// the polygon edge from vertex `k` to vertex `k + 1 (mod N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    nodes: Vec<T>,
    widths: Vec<T>,
}

impl<T: Real> Grid<T> {
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 vertices, got {n}"
            )));
        }
        let h = T::TAU() / from_usize(n);
        let mut nodes: Vec<T> = (0..n).map(|j| from_usize::<T>(j) * h).collect();
        nodes.push(T::TAU());
        Ok(Grid {
            nodes,
            widths: vec![h; n],
        })
    }

    /// Builds a grid from the `N + 1` nodes `u_0 = 0, ..., u_N = 2π`.
    pub fn from_nodes(nodes: Vec<T>) -> Result<Self> {
        if nodes.len() < 4 {
            return Err(Error::InvalidGrid(format!(
                "need at least 4 nodes (3 elements), got {}",
                nodes.len()
            )));
        }
        let tol = lit::<T>(1e-12);
        if nodes[0].abs() > tol || (nodes[nodes.len() - 1] - T::TAU()).abs() > tol {
            return Err(Error::InvalidGrid(
                "nodes must start at 0 and end at 2π".into(),
            ));
        }
        let widths: Vec<T> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(k) = widths.iter().position(|&h| !(h > T::zero())) {
            return Err(Error::InvalidGrid(format!(
                "element {k} has non-positive width"
            )));
        }
        Ok(Grid { nodes, widths })
    }

    /// Number of vertices (and elements).
    pub fn len(&self) -> usize {
        self.widths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.widths.is_empty()
    }

    /// Parameter value of vertex `j`, taken cyclically.
    pub fn node(&self, j: usize) -> T {
        self.nodes[j % self.len()]
    }

    /// All `N + 1` nodes including the closing `u_N = 2π`.
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn width(&self, k: usize) -> T {
        self.widths[k % self.len()]
    }

    pub fn widths(&self) -> &[T] {
        &self.widths
    }

    /// Largest element width.
    pub fn h(&self) -> T {
        self.widths.iter().copied().fold(T::zero(), T::max)
    }
}
