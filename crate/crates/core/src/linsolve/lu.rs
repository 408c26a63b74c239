//! Left-looking sparse LU with partial pivoting.
//!
//! Column `k` of the factor is obtained from a sparse triangular solve with
//! the columns already factored; the nonzero pattern of that solve is the
//! set of rows reachable from the pattern of `A[:, q_k]` in the graph of `L`,
//! visited in topological order. Rows are pivoted on magnitude only.

use crate::error::{Error, Result};
use crate::linsolve::SparseMatrix;
use crate::num::{from_usize, Real};

const UNPIVOTED: usize = usize::MAX;

/// Counts of stored entries before and after factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FillStats {
    pub nnz_a: usize,
    pub nnz_l: usize,
    pub nnz_u: usize,
}

/// `P A Q = L U` with unit lower-triangular `L`.
#[derive(Debug, Clone)]
pub struct Factorization<T> {
    n: usize,
    col_order: Vec<usize>,
    pivot_rows: Vec<usize>,
    // L by columns, row indices in the original numbering, unit diagonal implied.
    l_ptr: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<T>,
    // U by columns, row indices in elimination-step numbering, diagonal apart.
    u_ptr: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<T>,
    u_diag: Vec<T>,
    stats: FillStats,
}

struct Workspace<T> {
    values: Vec<T>,
    mark: Vec<usize>,
    reach: Vec<usize>,
    stack: Vec<(usize, usize)>,
}

impl<T: Real> Factorization<T> {
    /// Factors `a` with its natural column order.
    pub fn new(a: &SparseMatrix<T>) -> Result<Self> {
        let order: Vec<usize> = (0..a.ncols()).collect();
        Self::with_column_order(a, &order)
    }

    /// Factors `a` eliminating column `col_order[k]` at step `k`.
    pub fn with_column_order(a: &SparseMatrix<T>, col_order: &[usize]) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || col_order.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "cannot factor a {}x{} matrix with a column order of length {}",
                a.nrows(),
                a.ncols(),
                col_order.len()
            )));
        }
        if !a.is_finite() {
            return Err(Error::NonFinite("system matrix"));
        }
        let floor = a.max_abs() * T::epsilon() * from_usize(n.max(1));

        let mut f = Factorization {
            n,
            col_order: col_order.to_vec(),
            pivot_rows: Vec::with_capacity(n),
            l_ptr: Vec::with_capacity(n + 1),
            l_idx: Vec::with_capacity(a.nnz() * 2),
            l_val: Vec::with_capacity(a.nnz() * 2),
            u_ptr: Vec::with_capacity(n + 1),
            u_idx: Vec::with_capacity(a.nnz() * 2),
            u_val: Vec::with_capacity(a.nnz() * 2),
            u_diag: Vec::with_capacity(n),
            stats: FillStats {
                nnz_a: a.nnz(),
                nnz_l: 0,
                nnz_u: 0,
            },
        };
        f.l_ptr.push(0);
        f.u_ptr.push(0);

        let mut pinv = vec![UNPIVOTED; n];
        let mut ws = Workspace {
            values: vec![T::zero(); n],
            mark: vec![UNPIVOTED; n],
            reach: Vec::with_capacity(n),
            stack: Vec::with_capacity(n),
        };

        for (k, &col) in col_order.iter().enumerate() {
            let (rows, vals) = a.column(col);
            f.reach(rows, &pinv, k, &mut ws);
            for (&r, &v) in rows.iter().zip(vals) {
                ws.values[r] = v;
            }
            // reach holds a postorder; walk it backwards for a topological order
            for idx in (0..ws.reach.len()).rev() {
                let r = ws.reach[idx];
                let step = pinv[r];
                if step == UNPIVOTED {
                    continue;
                }
                let xr = ws.values[r];
                for p in f.l_ptr[step]..f.l_ptr[step + 1] {
                    let i = f.l_idx[p];
                    ws.values[i] = ws.values[i] - f.l_val[p] * xr;
                }
            }

            let mut pivot_row = UNPIVOTED;
            let mut pivot_abs = T::zero();
            for &r in &ws.reach {
                if pinv[r] == UNPIVOTED {
                    let mag = ws.values[r].abs();
                    if mag > pivot_abs || (mag == pivot_abs && pivot_row != UNPIVOTED && r < pivot_row) {
                        pivot_abs = mag;
                        pivot_row = r;
                    }
                } else {
                    f.u_idx.push(pinv[r]);
                    f.u_val.push(ws.values[r]);
                }
            }
            if pivot_row == UNPIVOTED || !(pivot_abs > floor) {
                return Err(Error::SingularMatrix { pivot: k });
            }
            let pivot = ws.values[pivot_row];
            pinv[pivot_row] = k;
            f.pivot_rows.push(pivot_row);
            f.u_diag.push(pivot);
            for &r in &ws.reach {
                if pinv[r] == UNPIVOTED {
                    f.l_idx.push(r);
                    f.l_val.push(ws.values[r] / pivot);
                }
                ws.values[r] = T::zero();
            }
            f.l_ptr.push(f.l_idx.len());
            f.u_ptr.push(f.u_idx.len());
        }
        f.stats.nnz_l = f.l_idx.len();
        f.stats.nnz_u = f.u_idx.len() + n;
        Ok(f)
    }

    /// Depth-first search from the pattern of the incoming column through the
    /// graph of `L`; leaves the reached rows in `ws.reach` in postorder.
    fn reach(&self, start: &[usize], pinv: &[usize], stamp: usize, ws: &mut Workspace<T>) {
        ws.reach.clear();
        for &root in start {
            if ws.mark[root] == stamp {
                continue;
            }
            ws.mark[root] = stamp;
            ws.stack.push((root, 0));
            while let Some(&(node, pos)) = ws.stack.last() {
                let step = pinv[node];
                let children = if step == UNPIVOTED {
                    &self.l_idx[0..0]
                } else {
                    &self.l_idx[self.l_ptr[step]..self.l_ptr[step + 1]]
                };
                let mut next = pos;
                let mut unvisited = None;
                while next < children.len() {
                    let child = children[next];
                    next += 1;
                    if ws.mark[child] != stamp {
                        unvisited = Some(child);
                        break;
                    }
                }
                let top = ws.stack.len() - 1;
                ws.stack[top].1 = next;
                match unvisited {
                    Some(child) => {
                        ws.mark[child] = stamp;
                        ws.stack.push((child, 0));
                    }
                    None => {
                        ws.stack.pop();
                        ws.reach.push(node);
                    }
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn fill(&self) -> FillStats {
        self.stats
    }

    /// Solves `A z = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for a system of dimension {}",
                b.len(),
                self.n
            )));
        }
        let mut work = b.to_vec();
        let mut y = vec![T::zero(); self.n];
        for k in 0..self.n {
            let yk = work[self.pivot_rows[k]];
            y[k] = yk;
            for p in self.l_ptr[k]..self.l_ptr[k + 1] {
                let i = self.l_idx[p];
                work[i] = work[i] - self.l_val[p] * yk;
            }
        }
        for k in (0..self.n).rev() {
            let zk = y[k] / self.u_diag[k];
            y[k] = zk;
            for p in self.u_ptr[k]..self.u_ptr[k + 1] {
                let i = self.u_idx[p];
                y[i] = y[i] - self.u_val[p] * zk;
            }
        }
        let mut z = vec![T::zero(); self.n];
        for (k, &col) in self.col_order.iter().enumerate() {
            z[col] = y[k];
        }
        Ok(z)
    }
}

/// `|A z - b|_∞ / (|A|_∞ |z|_∞ + |b|_∞)`, zero for the trivial system.
pub fn scaled_residual<T: Real>(a: &SparseMatrix<T>, z: &[T], b: &[T]) -> T {
    let az = a.mul_vec(z);
    let inf = |v: &[T]| v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let r = az.iter().zip(b).fold(T::zero(), |m, (&p, &q)| m.max((p - q).abs()));
    let denom = a.norm_inf() * inf(z) + inf(b);
    if denom.is_zero() {
        r
    } else {
        r / denom
    }
}

/// Upper bound on refinement sweeps in [`solve_checked`].
pub const REFINEMENT_SWEEPS: usize = 2;

fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `b - A z` evaluated with error-free sums and fused products, so the
/// result carries roughly twice the working precision before rounding.
pub fn compensated_residual<T: Real>(a: &SparseMatrix<T>, z: &[T], b: &[T]) -> Vec<T> {
    let mut sum = b.to_vec();
    let mut carry = vec![T::zero(); b.len()];
    for (j, &zj) in z.iter().enumerate() {
        let (rows, vals) = a.column(j);
        for (&i, &v) in rows.iter().zip(vals) {
            let p = -v * zj;
            let p_err = (-v).mul_add(zj, -p);
            let (t, t_err) = two_sum(sum[i], p);
            sum[i] = t;
            carry[i] = carry[i] + t_err + p_err;
        }
    }
    sum.iter().zip(carry).map(|(&s, c)| s + c).collect()
}

/// Factors, solves, refines against a compensated residual and checks the
/// scaled residual against [`Real::residual_tolerance`].
pub fn solve_checked<T: Real>(a: &SparseMatrix<T>, b: &[T], col_order: &[usize]) -> Result<Vec<T>> {
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("right-hand side"));
    }
    let lu = Factorization::with_column_order(a, col_order)?;
    let mut z = lu.solve(b)?;
    for _ in 0..REFINEMENT_SWEEPS {
        let dz = lu.solve(&compensated_residual(a, &z, b))?;
        let size = z.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let change = dz.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        z.iter_mut().zip(&dz).for_each(|(v, d)| *v = *v + *d);
        if !(change > T::epsilon() * size) {
            break;
        }
    }
    let residual = scaled_residual(a, &z, b);
    let tolerance = T::residual_tolerance();
    if !(residual <= tolerance) {
        return Err(Error::Accuracy {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tolerance: tolerance.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(z)
}
