//! Independent oracles shared by the integration and acceptance suites.
//!
//! Apart from `check`, nothing here calls into the crate's assembly or factorization code: the
//! weak forms are integrated directly with hat functions and 3-point Gauss
//! rules per element, and dense systems are solved by textbook elimination.

#![allow(dead_code)]

pub mod check;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense Gaussian elimination with partial pivoting on a row-major matrix.
pub fn dense_solve(matrix: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut a = matrix.to_vec();
    let mut b = rhs.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().partial_cmp(&a[j * n + k].abs()).unwrap())
            .unwrap();
        assert!(a[p * n + k] != 0.0, "dense oracle hit a singular matrix");
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            b.swap(k, p);
        }
        for i in k + 1..n {
            let f = a[i * n + k] / a[k * n + k];
            if f == 0.0 {
                continue;
            }
            for c in k..n {
                a[i * n + c] -= f * a[k * n + c];
            }
            b[i] -= f * b[k];
        }
    }
    let mut z = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| a[k * n + c] * z[c]).sum();
        z[k] = (b[k] - s) / a[k * n + k];
    }
    z
}

/// Doolittle factors with partial pivoting, kept for repeated solves.
pub struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    pub fn new(matrix: &[f64], n: usize) -> Self {
        let mut lu = matrix.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[i * n + k].abs().partial_cmp(&lu[j * n + k].abs()).unwrap())
                .unwrap();
            assert!(lu[p * n + k] != 0.0, "dense oracle hit a singular matrix");
            if p != k {
                for c in 0..n {
                    lu.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            for i in k + 1..n {
                let f = lu[i * n + k] / lu[k * n + k];
                lu[i * n + k] = f;
                for c in k + 1..n {
                    lu[i * n + c] -= f * lu[k * n + c];
                }
            }
        }
        DenseLu { n, lu, perm }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut z: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for k in 0..n {
            for c in 0..k {
                z[k] -= self.lu[k * n + c] * z[c];
            }
        }
        for k in (0..n).rev() {
            for c in k + 1..n {
                z[k] -= self.lu[k * n + c] * z[c];
            }
            z[k] /= self.lu[k * n + k];
        }
        z
    }
}

/// `b - A z` with Knuth's two-sum and an FMA product error per term.
pub fn exact_residual(matrix: &[f64], z: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    (0..n)
        .map(|i| {
            let (mut s, mut err) = (rhs[i], 0.0);
            for j in 0..n {
                let p = -matrix[i * n + j] * z[j];
                err += (-matrix[i * n + j]).mul_add(z[j], -p);
                let t = s + p;
                let v = t - s;
                err += (s - (t - v)) + (p - v);
                s = t;
            }
            s + err
        })
        .collect()
}

/// Dense elimination followed by refinement against [`exact_residual`];
/// accurate to a few ulps for condition numbers well below `1e16`.
pub fn dense_solve_refined(matrix: &[f64], rhs: &[f64]) -> Vec<f64> {
    let lu = DenseLu::new(matrix, rhs.len());
    let mut z = lu.solve(rhs);
    for _ in 0..4 {
        let dz = lu.solve(&exact_residual(matrix, &z, rhs));
        z.iter_mut().zip(&dz).for_each(|(v, d)| *v += d);
    }
    z
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Mass,
    Bending,
    Transport,
    Penalty,
    Monitor,
    CurvatureMass,
    CurvatureCoupling,
}

pub const ALL_TERMS: [Term; 7] = [
    Term::Mass,
    Term::Bending,
    Term::Transport,
    Term::Penalty,
    Term::Monitor,
    Term::CurvatureMass,
    Term::CurvatureCoupling,
];

#[derive(Clone, Copy)]
pub enum OracleScheme {
    Dirichlet { lambda: f64 },
    Extended { lambda_tilde: f64, epsilon: f64, monitor: fn(&[f64]) -> f64 },
}

pub struct OracleSystem {
    pub size: usize,
    pub matrix: Vec<f64>,
    pub rhs: Vec<f64>,
}

const GAUSS_POINTS: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GAUSS_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

struct Discretization<'a> {
    nodes: &'a [f64],
    n: usize,
}

impl Discretization<'_> {
    /// Value and derivative of hat function `i` at `u` inside element `e`.
    fn hat(&self, i: usize, e: usize, u: f64) -> (f64, f64) {
        let (lo, hi) = (self.nodes[e], self.nodes[e + 1]);
        let h = hi - lo;
        if i == e % self.n {
            ((hi - u) / h, -1.0 / h)
        } else if i == (e + 1) % self.n {
            ((u - lo) / h, 1.0 / h)
        } else {
            (0.0, 0.0)
        }
    }

    /// Piecewise linear interpolant of nodal vectors: value and derivative.
    fn field(&self, nodal: &[Vec<f64>], e: usize, u: f64) -> (Vec<f64>, Vec<f64>) {
        let dim = nodal[0].len();
        let mut v = vec![0.0; dim];
        let mut d = vec![0.0; dim];
        for (i, p) in nodal.iter().enumerate() {
            let (phi, dphi) = self.hat(i, e, u);
            for c in 0..dim {
                v[c] += p[c] * phi;
                d[c] += p[c] * dphi;
            }
        }
        (v, d)
    }

    fn scalar(&self, nodal: &[f64], e: usize, u: f64) -> f64 {
        nodal.iter().enumerate().map(|(i, &s)| s * self.hat(i, e, u).0).sum()
    }

    /// `Σ_e Σ_g w_g f(e, u_g)` over all elements.
    fn integrate(&self, mut f: impl FnMut(usize, f64) -> f64) -> f64 {
        let mut total = 0.0;
        for e in 0..self.n {
            let (lo, hi) = (self.nodes[e], self.nodes[e + 1]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (g, w) in GAUSS_POINTS.iter().zip(GAUSS_WEIGHTS) {
                total += w * half * f(e, mid + half * g);
            }
        }
        total
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn unit(dim: usize, c: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[c] = 1.0;
    v
}

/// Integrates the weak forms of one step for every pair of test function
/// and unknown basis function, keeping only the selected terms.
///
/// Unknowns and rows use the layout `[x_0..x_{N-1}, y_0..y_{N-1}]`.
pub fn quadrature_system(
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    nodes: &[f64],
    delta: f64,
    scheme: OracleScheme,
    terms: &[Term],
) -> OracleSystem {
    let n = x.len();
    let dim = x[0].len();
    let size = 2 * n * dim;
    let disc = Discretization { nodes, n };
    let on = |t: Term| terms.contains(&t);
    let mut matrix = vec![0.0; size * size];
    let mut rhs = vec![0.0; size];

    let y_sq: Vec<f64> = y.iter().map(|v| dot(v, v)).collect();
    let monitor_nodal: Option<Vec<f64>> = match scheme {
        OracleScheme::Extended { monitor, .. } => Some(x.iter().map(|p| monitor(p)).collect()),
        _ => None,
    };

    // geometry of the old level at a quadrature point
    let geometry = |e: usize, u: f64| {
        let (_, xu) = disc.field(x, e, u);
        let speed = dot(&xu, &xu).sqrt();
        let tau: Vec<f64> = xu.iter().map(|v| v / speed).collect();
        (speed, tau)
    };
    let project = |tau: &[f64], v: &[f64]| -> Vec<f64> {
        let s = dot(tau, v);
        v.iter().zip(tau).map(|(a, t)| a - s * t).collect()
    };
    // basis function `vertex` in direction `c`, evaluated in element e
    let basis = |vertex: usize, c: usize, e: usize, u: f64| {
        let (phi, dphi) = disc.hat(vertex, e, u);
        let dir = unit(dim, c);
        (
            dir.iter().map(|d| d * phi).collect::<Vec<f64>>(),
            dir.iter().map(|d| d * dphi).collect::<Vec<f64>>(),
        )
    };
    // I_h of the pointwise product of two nodal vector fields
    let lumped = |f: &dyn Fn(usize) -> Vec<f64>, g: &dyn Fn(usize) -> Vec<f64>, e: usize, u: f64| {
        let nodal: Vec<f64> = (0..n).map(|p| dot(&f(p), &g(p))).collect();
        disc.scalar(&nodal, e, u)
    };
    let nodal_basis = |vertex: usize, c: usize| {
        move |p: usize| {
            if p == vertex {
                unit(dim, c)
            } else {
                vec![0.0; dim]
            }
        }
    };

    for i in 0..n {
        for k in 0..dim {
            let row_x = i * dim + k;
            let row_y = (n + i) * dim + k;
            let test = nodal_basis(i, k);

            // right-hand side from the old positions in the velocity term
            if on(Term::Mass) {
                rhs[row_x] = match scheme {
                    OracleScheme::Dirichlet { .. } => disc.integrate(|e, u| {
                        let (speed, _) = geometry(e, u);
                        lumped(&|p| x[p].iter().map(|v| v / delta).collect(), &test, e, u) * speed
                    }),
                    OracleScheme::Extended { epsilon, .. } => disc.integrate(|e, u| {
                        let (speed, tau) = geometry(e, u);
                        let (xm, _) = disc.field(x, e, u);
                        let v: Vec<f64> = xm.iter().map(|a| a / delta).collect();
                        let (phi, _) = basis(i, k, e, u);
                        (dot(&project(&tau, &v), &phi) + epsilon * dot(&v, &tau) * dot(&tau, &phi)) * speed
                    }),
                };
            }

            for l in 0..n {
                for c in 0..dim {
                    let col_x = l * dim + c;
                    let col_y = (n + l) * dim + c;
                    let trial = nodal_basis(l, c);

                    // position equation, unknown x_l
                    let mut a_xx = 0.0;
                    if on(Term::Mass) {
                        a_xx += match scheme {
                            OracleScheme::Dirichlet { .. } => disc.integrate(|e, u| {
                                lumped(&trial, &test, e, u) * geometry(e, u).0 / delta
                            }),
                            OracleScheme::Extended { epsilon, .. } => disc.integrate(|e, u| {
                                let (speed, tau) = geometry(e, u);
                                let (v, _) = basis(l, c, e, u);
                                let (phi, _) = basis(i, k, e, u);
                                (dot(&project(&tau, &v), &phi) + epsilon * dot(&v, &tau) * dot(&tau, &phi))
                                    * speed
                                    / delta
                            }),
                        };
                    }
                    if on(Term::Transport) {
                        a_xx -= 0.5
                            * disc.integrate(|e, u| {
                                let (speed, _) = geometry(e, u);
                                let (_, vu) = basis(l, c, e, u);
                                let (_, phiu) = basis(i, k, e, u);
                                disc.scalar(&y_sq, e, u) * dot(&vu, &phiu) / speed
                            });
                    }
                    if on(Term::Penalty) {
                        a_xx += match scheme {
                            OracleScheme::Dirichlet { lambda } => {
                                lambda
                                    * disc.integrate(|e, u| {
                                        let (_, vu) = basis(l, c, e, u);
                                        let (_, phiu) = basis(i, k, e, u);
                                        dot(&vu, &phiu)
                                    })
                            }
                            OracleScheme::Extended { lambda_tilde, .. } => {
                                lambda_tilde
                                    * disc.integrate(|e, u| {
                                        let (speed, _) = geometry(e, u);
                                        let (_, vu) = basis(l, c, e, u);
                                        let (_, phiu) = basis(i, k, e, u);
                                        dot(&vu, &phiu) / speed
                                    })
                            }
                        };
                    }
                    if on(Term::Monitor) {
                        if let (OracleScheme::Extended { epsilon, .. }, Some(m)) = (scheme, &monitor_nodal) {
                            a_xx += epsilon
                                * disc.integrate(|e, u| {
                                    let (_, vu) = basis(l, c, e, u);
                                    let (_, phiu) = basis(i, k, e, u);
                                    disc.scalar(m, e, u) * dot(&vu, &phiu)
                                });
                        }
                    }
                    matrix[row_x * size + col_x] = a_xx;

                    // position equation, unknown y_l
                    if on(Term::Bending) {
                        matrix[row_x * size + col_y] = -disc.integrate(|e, u| {
                            let (speed, tau) = geometry(e, u);
                            let (_, yu) = basis(l, c, e, u);
                            let (_, phiu) = basis(i, k, e, u);
                            dot(&project(&tau, &yu), &phiu) / speed
                        });
                    }

                    // curvature equation
                    if on(Term::CurvatureMass) {
                        matrix[row_y * size + col_y] =
                            disc.integrate(|e, u| lumped(&trial, &test, e, u) * geometry(e, u).0);
                    }
                    if on(Term::CurvatureCoupling) {
                        matrix[row_y * size + col_x] = disc.integrate(|e, u| {
                            let (speed, _) = geometry(e, u);
                            let (_, vu) = basis(l, c, e, u);
                            let (_, psiu) = basis(i, k, e, u);
                            dot(&vu, &psiu) / speed
                        });
                    }
                }
            }
        }
    }
    OracleSystem { size, matrix, rhs }
}

/// Hexagon-like polygon: regular `n`-gon of radius `radius` with every
/// vertex displaced by up to `jitter` per coordinate (planar part) and a
/// small out-of-plane component in 3D.
pub fn perturbed_polygon(rng: &mut impl Rng, n: usize, dim: usize, radius: f64, jitter: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|j| {
            let a = std::f64::consts::TAU * j as f64 / n as f64;
            let mut p = vec![radius * a.cos(), radius * a.sin()];
            for v in p.iter_mut() {
                *v += rng.gen_range(-jitter..jitter);
            }
            if dim == 3 {
                p.push(rng.gen_range(-jitter..jitter));
            }
            p
        })
        .collect()
}

pub fn random_field(rng: &mut impl Rng, n: usize, dim: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(-scale..scale)).collect())
        .collect()
}

/// Random orthogonal matrix (row-major) with determinant `±1`, and a shift.
pub fn random_rigid_motion(rng: &mut impl Rng, dim: usize) -> (Vec<f64>, Vec<f64>) {
    // Gram-Schmidt on a random matrix
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for c in &cols {
            let s = dot(&v, c);
            v.iter_mut().zip(c).for_each(|(a, b)| *a -= s * b);
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-3 {
            cols.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    let mut q = vec![0.0; dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            q[r * dim + c] = cols[c][r];
        }
    }
    let b = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
    (q, b)
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, a| m.max(a.abs()))
}

/// `max |a - b| / max(max |b|, tiny)`.
pub fn relative_diff(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    diff / max_abs(b).max(1e-300)
}
