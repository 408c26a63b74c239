//! Analytic circle solutions, curvature error metric and convergence tables.

use crate::error::{Error, Result};
use crate::mesh::{CurvatureField, Grid, Preset};
use crate::num::{from_usize, lit, norm_sq, to_f64, Real};

/// Runge-Kutta substeps per flow time step.
pub const ODE_SUBSTEPS: usize = 10;

/// Radius law of a self-similar circle `R(t) (cos u, sin u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeVariant<T> {
    /// `Ṙ = 1/(2R³) - λ`, stationary at `(2λ)^{-1/3}`.
    Dirichlet { lambda: T },
    /// `Ṙ = 1/(2R³) - λ̃/R`, stationary at `(2λ̃)^{-1/2}`.
    Length { lambda_tilde: T },
}

impl<T: Real> OdeVariant<T> {
    fn rate(&self, r: T) -> T {
        let half_inv_cube = T::one() / (lit::<T>(2.0) * r * r * r);
        match *self {
            OdeVariant::Dirichlet { lambda } => half_inv_cube - lambda,
            OdeVariant::Length { lambda_tilde } => half_inv_cube - lambda_tilde / r,
        }
    }

    pub fn stationary_radius(&self) -> T {
        match *self {
            OdeVariant::Dirichlet { lambda } => (lit::<T>(2.0) * lambda).cbrt().recip(),
            OdeVariant::Length { lambda_tilde } => (lit::<T>(2.0) * lambda_tilde).sqrt().recip(),
        }
    }
}

/// Radius sampled at every flow time level `t^{(m)} = m δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleOde<T> {
    pub variant: OdeVariant<T>,
    pub delta: T,
    radii: Vec<T>,
}

impl<T: Real> CircleOde<T> {
    pub fn radius(&self, step: usize) -> T {
        self.radii[step]
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn steps(&self) -> usize {
        self.radii.len() - 1
    }
}

/// Integrates the radius law on `[0, T]` with classical RK4,
/// [`ODE_SUBSTEPS`] substeps per flow step.
pub fn circle_radius_ode<T: Real>(
    variant: OdeVariant<T>,
    r0: T,
    t_final: T,
    steps: usize,
) -> Result<CircleOde<T>> {
    let weight = match variant {
        OdeVariant::Dirichlet { lambda } => lambda,
        OdeVariant::Length { lambda_tilde } => lambda_tilde,
    };
    if !(r0 > T::zero()) || !(weight > T::zero()) || !(t_final > T::zero()) || steps == 0 {
        return Err(Error::param(
            "r0",
            "radius, weight and horizon must be positive with at least one step",
        ));
    }
    let delta = t_final / from_usize(steps);
    let dt = delta / from_usize(ODE_SUBSTEPS);
    let (half, sixth, two) = (lit::<T>(0.5), lit::<T>(1.0 / 6.0), lit::<T>(2.0));
    let mut radii = Vec::with_capacity(steps + 1);
    let mut r = r0;
    radii.push(r);
    for m in 0..steps {
        for _ in 0..ODE_SUBSTEPS {
            let k1 = variant.rate(r);
            let k2 = variant.rate(r + half * dt * k1);
            let k3 = variant.rate(r + half * dt * k2);
            let k4 = variant.rate(r + dt * k3);
            r = r + dt * sixth * (k1 + two * k2 + two * k3 + k4);
            if !(r > T::zero()) {
                return Err(Error::BlowDown {
                    t: to_f64(from_usize::<T>(m + 1) * delta),
                    radius: to_f64(r),
                });
            }
        }
        radii.push(r);
    }
    Ok(CircleOde {
        variant,
        delta,
        radii,
    })
}

/// Nodal curvature `-(1/R(t)) (cos u_j, sin u_j)` of the shrinking circle.
#[derive(Debug, Clone)]
pub struct ExactCircleCurvature<T> {
    dim: usize,
    directions: Vec<T>,
    ode: CircleOde<T>,
}

pub fn exact_circle_curvature<T: Real>(
    ode: &CircleOde<T>,
    preset: &Preset<T>,
    grid: &Grid<T>,
    dim: usize,
) -> Result<ExactCircleCurvature<T>> {
    if !matches!(preset, Preset::Circle { .. }) {
        return Err(Error::UnsupportedReference(format!(
            "no analytic curvature for preset `{}`",
            preset.name()
        )));
    }
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut directions = vec![T::zero(); grid.len() * dim];
    for (j, d) in directions.chunks_exact_mut(dim).enumerate() {
        let (s, c) = grid.node(j).sin_cos();
        d[0] = c;
        d[1] = s;
    }
    Ok(ExactCircleCurvature {
        dim,
        directions,
        ode: ode.clone(),
    })
}

impl<T: Real> ExactCircleCurvature<T> {
    pub fn at(&self, step: usize) -> CurvatureField<T> {
        let scale = -self.ode.radius(step).recip();
        let coords = self.directions.iter().map(|&d| scale * d).collect();
        CurvatureField::new(self.dim, coords).expect("directions form a valid nodal field")
    }

    pub fn steps(&self) -> usize {
        self.ode.steps()
    }
}

/// `(2π/N) Σ_j |exact_j - discrete_j|²`.
pub fn lumped_error_sq<T: Real>(exact: &CurvatureField<T>, discrete: &CurvatureField<T>) -> Result<T> {
    if exact.len() != discrete.len() || exact.dim() != discrete.dim() {
        return Err(Error::GridMismatch(format!(
            "reference has {} vertices, discrete field {}",
            exact.len(),
            discrete.len()
        )));
    }
    let mut diff = vec![T::zero(); exact.dim()];
    let mut sum = T::zero();
    for (e, d) in exact.iter().zip(discrete.iter()) {
        for (slot, (&p, &q)) in diff.iter_mut().zip(e.iter().zip(d)) {
            *slot = p - q;
        }
        sum = sum + norm_sq(&diff);
    }
    Ok(T::TAU() / from_usize(exact.len()) * sum)
}

/// Per-step squared curvature errors and their maximum over steps `m ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureError<T> {
    pub series: Vec<T>,
    pub max: T,
}

impl<T: Real> CurvatureError<T> {
    /// Wraps a series indexed by step, entry 0 belonging to the initial level.
    pub fn from_series(series: Vec<T>) -> Self {
        let max = series.iter().skip(1).copied().fold(T::zero(), T::max);
        CurvatureError { series, max }
    }
}

/// Compares matched `(exact, discrete)` fields for steps `0, 1, ..., m_T`.
pub fn curvature_error<'a, T, I>(pairs: I) -> Result<CurvatureError<T>>
where
    T: Real,
    I: IntoIterator<Item = (&'a CurvatureField<T>, &'a CurvatureField<T>)>,
{
    let series = pairs
        .into_iter()
        .map(|(e, d)| lumped_error_sq(e, d))
        .collect::<Result<Vec<T>>>()?;
    Ok(CurvatureError::from_series(series))
}

/// One resolution of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceSample<T> {
    pub vertices: usize,
    pub steps: usize,
    pub delta: T,
    pub err: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EocRow<T> {
    pub vertices: usize,
    pub h: T,
    pub steps: usize,
    pub delta: T,
    pub err: T,
    /// Undefined for the first row.
    pub eoc: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EocTable<T> {
    pub rows: Vec<EocRow<T>>,
}

/// Experimental orders `log(e_{k-1}/e_k) / log(h_{k-1}/h_k)` with `h = 2π/N`.
pub fn eoc_table<T: Real>(samples: &[ConvergenceSample<T>]) -> Result<EocTable<T>> {
    if samples.is_empty() {
        return Err(Error::Config("convergence table needs at least one resolution".into()));
    }
    if samples.windows(2).any(|w| w[1].vertices <= w[0].vertices) {
        return Err(Error::Config("vertex counts must increase strictly".into()));
    }
    let mut rows: Vec<EocRow<T>> = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        if !(s.err > T::zero()) {
            return Err(Error::UndefinedEoc { row: i });
        }
        let h = T::TAU() / from_usize(s.vertices);
        let eoc = rows
            .last()
            .map(|prev| (prev.err / s.err).ln() / (prev.h / h).ln());
        rows.push(EocRow {
            vertices: s.vertices,
            h,
            steps: s.steps,
            delta: s.delta,
            err: s.err,
            eoc,
        });
    }
    Ok(EocTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points_stay_put() {
        let ode = circle_radius_ode(OdeVariant::Dirichlet { lambda: 0.5f64 }, 1.0, 5.0, 500).unwrap();
        assert!(ode.radii().iter().all(|&r| (r - 1.0).abs() <= 1e-12));
        let ode = circle_radius_ode(OdeVariant::Length { lambda_tilde: 0.5f64 }, 1.0, 5.0, 500).unwrap();
        assert!(ode.radii().iter().all(|&r| (r - 1.0).abs() <= 1e-12));
        assert!((OdeVariant::Dirichlet { lambda: 0.1f64 }.stationary_radius() - 5f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn shrinking_circle_is_monotone() {
        let ode = circle_radius_ode(OdeVariant::Dirichlet { lambda: 0.5 }, 1.5, 1.0, 400).unwrap();
        assert!(ode.radii().windows(2).all(|w| w[1] < w[0]));
        assert!(ode.radius(400) > 1.0);
    }

    #[test]
    fn rk4_order() {
        // R(T) at three substep resolutions (via the flow-step count)
        let end = |steps| {
            *circle_radius_ode(OdeVariant::Dirichlet { lambda: 0.5f64 }, 1.5, 1.0, steps)
                .unwrap()
                .radii()
                .last()
                .unwrap()
        };
        let (a, b, c) = (end(2), end(4), end(8));
        let order = ((a - b) / (b - c)).log2();
        assert!(order >= 3.8, "observed order {order}");
    }

    #[test]
    fn blow_down_is_guarded() {
        let err = circle_radius_ode(OdeVariant::Dirichlet { lambda: 50.0 }, 0.2, 10.0, 10).unwrap_err();
        assert!(matches!(err, Error::BlowDown { .. }));
    }

    #[test]
    fn exact_curvature_values() {
        let g = Grid::<f64>::uniform(8).unwrap();
        let ode = circle_radius_ode(OdeVariant::Dirichlet { lambda: 0.5 }, 1.5, 1.0, 10).unwrap();
        let exact = exact_circle_curvature(&ode, &Preset::Circle { radius: 1.5 }, &g, 2).unwrap();
        let y0 = exact.at(0);
        assert!((y0.vertex(0)[0] + 2.0 / 3.0).abs() < 1e-15 && y0.vertex(0)[1] == 0.0);
        let y5 = exact.at(5);
        for v in y5.iter() {
            assert!((norm_sq(v).sqrt() - 1.0 / ode.radius(5)).abs() < 1e-14);
        }
        assert!(matches!(
            exact_circle_curvature(&ode, &Preset::Lemniscate, &g, 2),
            Err(Error::UnsupportedReference(_))
        ));
    }

    #[test]
    fn error_functional() {
        let a = CurvatureField::new(2, vec![1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0]).unwrap();
        assert_eq!(lumped_error_sq(&a, &a).unwrap(), 0.0);
        let mut b = a.clone();
        b.vertex_mut(2)[0] += 0.3;
        b.vertex_mut(2)[1] -= 0.4;
        let e = lumped_error_sq(&a, &b).unwrap();
        assert!((e - std::f64::consts::TAU / 4.0 * 0.25).abs() < 1e-15);
        let series = curvature_error([(&a, &b), (&a, &a), (&a, &b)]).unwrap();
        assert_eq!(series.series.len(), 3);
        assert_eq!(series.max, e);
        let short = CurvatureField::new(2, vec![0.0; 6]).unwrap();
        assert!(lumped_error_sq(&a, &short).is_err());
    }

    fn sample(n: usize, err: f64) -> ConvergenceSample<f64> {
        ConvergenceSample {
            vertices: n,
            steps: n * n,
            delta: 1.0 / (n * n) as f64,
            err,
        }
    }

    #[test]
    fn eoc_from_table_values() {
        let t = eoc_table(&[sample(20, 1.556e-5), sample(30, 3.0805e-6)]).unwrap();
        assert!(t.rows[0].eoc.is_none());
        assert!((t.rows[1].eoc.unwrap() - 3.994).abs() < 1e-3);
        let t = eoc_table(&[sample(46, 5.5786e-7), sample(60, 1.9279e-7)]).unwrap();
        assert!((t.rows[1].eoc.unwrap() - 3.9988).abs() < 1e-3);
        let t = eoc_table(&[sample(10, 0.2), sample(20, 0.1), sample(40, 0.05)]).unwrap();
        assert!(t.rows[1..].iter().all(|r| (r.eoc.unwrap() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn eoc_rejections() {
        assert!(matches!(eoc_table(&[sample(20, 0.0)]), Err(Error::UndefinedEoc { row: 0 })));
        assert!(eoc_table(&[sample(30, 1.0), sample(20, 0.5)]).is_err());
        assert!(eoc_table::<f64>(&[]).is_err());
        assert_eq!(eoc_table(&[sample(20, 1e-5)]).unwrap().rows.len(), 1);
    }
}
