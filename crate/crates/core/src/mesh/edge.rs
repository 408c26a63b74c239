use crate::error::{Error, Result};
use crate::mesh::{CurvatureField, CurveState};
use crate::num::{lit, norm, norm_sq, to_f64, Real};

/// Relative edge-length floor: an edge shorter than this fraction of the
/// polygon length counts as degenerate.
pub const DEGENERACY_RATIO: f64 = 1e-12;

/// Per-edge quantities frozen at one time level. Edge `k` joins vertex `k`
/// to vertex `k + 1 (mod N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeData<T> {
    dim: usize,
    lengths: Vec<T>,
    tangents: Vec<T>,
    projectors: Vec<T>,
    weights: Vec<T>,
}

/// Edge lengths `q_k = |x_{k+1} - x_k|`, rejecting edges at or below the
/// scale-aware floor `1e-12 · Σ q`.
pub fn edge_lengths<T: Real>(x: &CurveState<T>) -> Result<Vec<T>> {
    let n = x.len();
    let dim = x.dim();
    let mut diff = vec![T::zero(); dim];
    let lengths: Vec<T> = (0..n)
        .map(|k| {
            for (d, (&a, &b)) in diff.iter_mut().zip(x.vertex(k + 1).iter().zip(x.vertex(k))) {
                *d = a - b;
            }
            norm(&diff)
        })
        .collect();
    check_lengths(&lengths)?;
    Ok(lengths)
}

fn check_lengths<T: Real>(lengths: &[T]) -> Result<()> {
    let total = lengths.iter().fold(T::zero(), |a, &q| a + q);
    let threshold = total * lit(DEGENERACY_RATIO);
    if !total.is_finite() {
        return Err(Error::NonFinite("edge lengths"));
    }
    match lengths.iter().position(|&q| !(q > threshold)) {
        Some(edge) => Err(Error::DegenerateMesh {
            edge,
            length: to_f64(lengths[edge]),
            threshold: to_f64(threshold),
        }),
        None => Ok(()),
    }
}

impl<T: Real> EdgeData<T> {
    /// Lengths, unit tangents, normal projectors `I - τ τᵀ` and curvature
    /// weights `d_k = (|y_k|² + |y_{k+1}|²) / (4 q_k)`.
    pub fn new(x: &CurveState<T>, y: &CurvatureField<T>) -> Result<Self> {
        if x.dim() != y.dim() || x.len() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "curve has {} vertices in R^{}, curvature has {} in R^{}",
                x.len(),
                x.dim(),
                y.len(),
                y.dim()
            )));
        }
        let lengths = edge_lengths(x)?;
        let dim = x.dim();
        let n = x.len();
        let mut tangents = Vec::with_capacity(n * dim);
        let mut projectors = Vec::with_capacity(n * dim * dim);
        let mut weights = Vec::with_capacity(n);
        for (k, &q) in lengths.iter().enumerate() {
            let start = tangents.len();
            for (&a, &b) in x.vertex(k + 1).iter().zip(x.vertex(k)) {
                tangents.push((a - b) / q);
            }
            let tau = &tangents[start..];
            for r in 0..dim {
                for c in 0..dim {
                    let id = if r == c { T::one() } else { T::zero() };
                    projectors.push(id - tau[r] * tau[c]);
                }
            }
            let four = lit::<T>(4.0);
            weights.push((norm_sq(y.vertex(k)) + norm_sq(y.vertex(k + 1))) / (four * q));
        }
        Ok(EdgeData {
            dim,
            lengths,
            tangents,
            projectors,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn length(&self, k: usize) -> T {
        self.lengths[k % self.len()]
    }

    pub fn lengths(&self) -> &[T] {
        &self.lengths
    }

    pub fn tangent(&self, k: usize) -> &[T] {
        let k = k % self.len();
        &self.tangents[k * self.dim..(k + 1) * self.dim]
    }

    /// Row-major `n × n` normal projector of edge `k`.
    pub fn projector(&self, k: usize) -> &[T] {
        let k = k % self.len();
        let sq = self.dim * self.dim;
        &self.projectors[k * sq..(k + 1) * sq]
    }

    pub fn weight(&self, k: usize) -> T {
        self.weights[k % self.len()]
    }

    pub fn total_length(&self) -> T {
        self.lengths.iter().fold(T::zero(), |a, &q| a + q)
    }
}
