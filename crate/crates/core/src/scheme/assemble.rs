//! Per-step linear systems.
//!
//! Both assemblers loop over elements; element `k` carries the edge from
//! vertex `a = k` to vertex `b = k + 1` with all geometric coefficients
//! (length, tangent, projector, `|y|²` weight) frozen at the old level.

use std::ops::BitOr;

use crate::error::{Error, Result};
use crate::linsolve::TripletBuilder;
use crate::mesh::{CurvatureField, CurveState, EdgeData, Grid};
use crate::num::{lit, Real};
use crate::scheme::system::{x_index, y_index};
use crate::scheme::{LinearSystem, SchemeParams, Variant};

/// Selects which contributions of the weak form are assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Terms(u8);

impl Terms {
    /// Velocity mass and its right-hand side.
    pub const MASS: Terms = Terms(1);
    /// Projected curvature stiffness `P y_u · φ_u / |x_u|`.
    pub const BENDING: Terms = Terms(1 << 1);
    /// `½ I_h(|y|²) x_u · φ_u / |x_u|`.
    pub const TRANSPORT: Terms = Terms(1 << 2);
    /// `λ x_u · φ_u` (Dirichlet) or `λ̃ x_u · φ_u / |x_u|` (extended).
    pub const PENALTY: Terms = Terms(1 << 3);
    /// `ε I_h(M) x_u · φ_u` (extended only).
    pub const MONITOR: Terms = Terms(1 << 4);
    /// Lumped mass of the curvature equation.
    pub const CURVATURE_MASS: Terms = Terms(1 << 5);
    /// `x_u · ψ_u / |x_u|` in the curvature equation.
    pub const CURVATURE_COUPLING: Terms = Terms(1 << 6);
    pub const ALL: Terms = Terms(0x7f);
    pub const NONE: Terms = Terms(0);

    pub fn contains(self, other: Terms) -> bool {
        self.0 & other.0 == other.0
    }
}

impl BitOr for Terms {
    type Output = Terms;

    fn bitor(self, rhs: Terms) -> Terms {
        Terms(self.0 | rhs.0)
    }
}

/// Assembles the step for whichever variant `params` selects.
pub fn assemble<T: Real>(
    x: &CurveState<T>,
    y: &CurvatureField<T>,
    params: &SchemeParams<T>,
    grid: &Grid<T>,
) -> Result<LinearSystem<T>> {
    assemble_terms(x, y, params, grid, Terms::ALL)
}

/// Dirichlet-penalized step with lumped velocity mass.
pub fn assemble_step<T: Real>(
    x: &CurveState<T>,
    y: &CurvatureField<T>,
    params: &SchemeParams<T>,
    grid: &Grid<T>,
) -> Result<LinearSystem<T>> {
    if params.is_extended() {
        return Err(Error::param("variant", "expected the Dirichlet scheme"));
    }
    assemble_terms(x, y, params, grid, Terms::ALL)
}

/// ε-weighted extended step with consistent velocity mass and monitor.
pub fn assemble_step_extended<T: Real>(
    x: &CurveState<T>,
    y: &CurvatureField<T>,
    params: &SchemeParams<T>,
    grid: &Grid<T>,
) -> Result<LinearSystem<T>> {
    if !params.is_extended() {
        return Err(Error::param("variant", "expected the extended scheme"));
    }
    assemble_terms(x, y, params, grid, Terms::ALL)
}

/// Assembles only the selected contributions.
pub fn assemble_terms<T: Real>(
    x: &CurveState<T>,
    y: &CurvatureField<T>,
    params: &SchemeParams<T>,
    grid: &Grid<T>,
    terms: Terms,
) -> Result<LinearSystem<T>> {
    params.validate()?;
    if x.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "curve with {} vertices on a grid with {}",
            x.len(),
            grid.len()
        )));
    }
    if x.as_slice().iter().chain(y.as_slice()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("step input"));
    }
    let edges = EdgeData::new(x, y)?;
    let n = x.len();
    let dim = x.dim();
    let size = 2 * n * dim;
    let mut asm = Assembler {
        triplets: TripletBuilder::with_capacity(size, size, 24 * n * dim * dim),
        rhs: vec![T::zero(); size],
    };
    let inv_delta = T::one() / params.delta;
    let half = lit::<T>(0.5);

    let monitor_values = match &params.variant {
        Variant::Extended { monitor, .. } if terms.contains(Terms::MONITOR) => {
            Some(monitor.nodal_values(x.iter())?)
        }
        _ => None,
    };

    for k in 0..n {
        let (a, b) = (k, (k + 1) % n);
        let q = edges.length(k);
        let projector = edges.projector(k);

        if terms.contains(Terms::MASS) {
            match &params.variant {
                Variant::Dirichlet { .. } => {
                    let m = half * q * inv_delta;
                    for &v in &[a, b] {
                        for c in 0..dim {
                            let row = x_index(n, dim, v, c);
                            asm.triplets.add(row, row, m);
                            asm.rhs[row] = asm.rhs[row] + m * x.vertex(v)[c];
                        }
                    }
                }
                Variant::Extended { epsilon, .. } => {
                    // consistent element mass (q/6)[2A A; A 2A] with A = P + ε ττᵀ
                    let tau = edges.tangent(k);
                    let sixth = q * inv_delta / lit(6.0);
                    for r in 0..dim {
                        for c in 0..dim {
                            let weight = projector[r * dim + c] + *epsilon * tau[r] * tau[c];
                            for &(row_v, col_v, factor) in
                                &[(a, a, 2.0), (a, b, 1.0), (b, a, 1.0), (b, b, 2.0)]
                            {
                                let coef = sixth * lit(factor) * weight;
                                let row = x_index(n, dim, row_v, r);
                                asm.triplets.add(row, x_index(n, dim, col_v, c), coef);
                                asm.rhs[row] = asm.rhs[row] + coef * x.vertex(col_v)[c];
                            }
                        }
                    }
                }
            }
        }

        if terms.contains(Terms::BENDING) {
            // row a: +P (y_b - y_a)/q, row b: -P (y_b - y_a)/q
            for r in 0..dim {
                for c in 0..dim {
                    let coef = projector[r * dim + c] / q;
                    asm.pair(x_index(n, dim, a, r), y_index(n, dim, b, c), y_index(n, dim, a, c), coef);
                    asm.pair(x_index(n, dim, b, r), y_index(n, dim, a, c), y_index(n, dim, b, c), coef);
                }
            }
        }

        if terms.contains(Terms::TRANSPORT) {
            // row a: +d (x_b - x_a), row b: -d (x_b - x_a)
            let d = edges.weight(k);
            for c in 0..dim {
                let (xa, xb) = (x_index(n, dim, a, c), x_index(n, dim, b, c));
                asm.pair(xa, xb, xa, d);
                asm.pair(xb, xa, xb, d);
            }
        }

        let stiffness = match &params.variant {
            Variant::Dirichlet { lambda } if terms.contains(Terms::PENALTY) => *lambda / grid.width(k),
            Variant::Extended { lambda_tilde, .. } if terms.contains(Terms::PENALTY) => *lambda_tilde / q,
            _ => T::zero(),
        };
        let stiffness = stiffness
            + match (&params.variant, &monitor_values) {
                (Variant::Extended { epsilon, .. }, Some(m)) => {
                    *epsilon * (m[a] + m[b]) * half / grid.width(k)
                }
                _ => T::zero(),
            };
        let penalized = terms.contains(Terms::PENALTY) || monitor_values.is_some();
        if penalized {
            // row a: s (x_a - x_b), row b: s (x_b - x_a)
            for c in 0..dim {
                let (xa, xb) = (x_index(n, dim, a, c), x_index(n, dim, b, c));
                asm.pair(xa, xa, xb, stiffness);
                asm.pair(xb, xb, xa, stiffness);
            }
        }

        if terms.contains(Terms::CURVATURE_MASS) {
            let m = half * q;
            for &v in &[a, b] {
                for c in 0..dim {
                    let row = y_index(n, dim, v, c);
                    asm.triplets.add(row, row, m);
                }
            }
        }

        if terms.contains(Terms::CURVATURE_COUPLING) {
            // row a: -(x_b - x_a)/q, row b: +(x_b - x_a)/q
            let inv_q = T::one() / q;
            for c in 0..dim {
                let (xa, xb) = (x_index(n, dim, a, c), x_index(n, dim, b, c));
                asm.pair(y_index(n, dim, a, c), xa, xb, inv_q);
                asm.pair(y_index(n, dim, b, c), xb, xa, inv_q);
            }
        }
    }

    Ok(LinearSystem {
        vertices: n,
        dim,
        time: x.t + params.delta,
        matrix: asm.triplets.build(),
        rhs: asm.rhs,
    })
}

struct Assembler<T> {
    triplets: TripletBuilder<T>,
    rhs: Vec<T>,
}

impl<T: Real> Assembler<T> {
    /// Adds `coef · (z[plus] - z[minus])` to equation `row`.
    #[inline]
    fn pair(&mut self, row: usize, plus: usize, minus: usize, coef: T) {
        self.triplets.add(row, plus, coef);
        self.triplets.add(row, minus, -coef);
    }
}
