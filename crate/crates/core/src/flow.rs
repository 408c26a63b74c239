//! Time stepping driver.

use std::fmt;

use crate::error::{Error, Result};
use crate::linsolve;
use crate::mesh::{
    edge_lengths, energy_parts, length_ratio, rotation_index, sample_preset, CurvatureField,
    CurveState, Diagnostics, Grid, Preset,
};
use crate::num::{from_usize, lit, to_f64, Real};
use crate::reference::{
    circle_radius_ode, eoc_table, exact_circle_curvature, lumped_error_sq, ConvergenceSample,
    EocTable, ExactCircleCurvature, OdeVariant,
};
use crate::scheme::{assemble, init_curvature, SchemeParams, Variant};

/// Relative slack when checking that recorded energies do not increase.
pub const ENERGY_SLACK: f64 = 1e-9;

fn time_tolerance<T: Real>() -> T {
    lit::<T>(1e-12).max(lit::<T>(16.0) * T::epsilon())
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig<T> {
    pub vertices: usize,
    pub dim: usize,
    pub preset: Preset<T>,
    pub params: SchemeParams<T>,
    pub t_final: T,
    pub steps: usize,
    pub record_stride: usize,
    /// Track the curvature error against the shrinking-circle solution.
    pub circle_reference: bool,
}

impl<T: Real> RunConfig<T> {
    /// Time step `δ = T / m_T`.
    pub fn with_steps(
        vertices: usize,
        dim: usize,
        preset: Preset<T>,
        variant: Variant<T>,
        t_final: T,
        steps: usize,
    ) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Config("step count must be at least 1".into()));
        }
        let cfg = RunConfig {
            vertices,
            dim,
            preset,
            params: SchemeParams {
                variant,
                delta: t_final / from_usize(steps),
            },
            t_final,
            steps,
            record_stride: 1,
            circle_reference: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Step count `T / δ`, which must come out integral.
    pub fn with_delta(
        vertices: usize,
        dim: usize,
        preset: Preset<T>,
        variant: Variant<T>,
        t_final: T,
        delta: T,
    ) -> Result<Self> {
        if !(delta > T::zero()) || !(t_final > T::zero()) {
            return Err(Error::Config("delta and T must be positive".into()));
        }
        let steps = (t_final / delta).round();
        if steps < T::one() || ((steps * delta - t_final) / t_final).abs() > time_tolerance() {
            return Err(Error::Config(format!(
                "T = {} is not an integer multiple of delta = {}",
                to_f64(t_final),
                to_f64(delta)
            )));
        }
        let steps = steps
            .to_usize()
            .ok_or_else(|| Error::Config("step count out of range".into()))?;
        let cfg = RunConfig {
            vertices,
            dim,
            preset,
            params: SchemeParams { variant, delta },
            t_final,
            steps,
            record_stride: 1,
            circle_reference: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn record_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn track_circle_error(mut self) -> Self {
        self.circle_reference = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > T::zero()) || !self.t_final.is_finite() {
            return Err(Error::Config("T must be positive".into()));
        }
        if self.steps == 0 {
            return Err(Error::Config("step count must be at least 1".into()));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("record stride must be at least 1".into()));
        }
        let drift = (self.params.delta * from_usize(self.steps) - self.t_final) / self.t_final;
        if drift.abs() > time_tolerance() {
            return Err(Error::Config("delta * steps must equal T".into()));
        }
        if self.vertices < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 vertices, got {}",
                self.vertices
            )));
        }
        if !(2..=3).contains(&self.dim) {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        self.params.validate()?;
        self.preset.validate()?;
        if self.circle_reference {
            if !matches!(self.preset, Preset::Circle { .. }) {
                return Err(Error::UnsupportedReference(format!(
                    "no analytic reference for preset `{}`",
                    self.preset.name()
                )));
            }
            if self.params.is_extended() {
                return Err(Error::UnsupportedReference(
                    "circle reference is only available for the Dirichlet scheme".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn delta(&self) -> T {
        self.params.delta
    }
}

/// Recorded time level.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub step: usize,
    pub t: T,
    pub state: CurveState<T>,
    pub curvature: CurvatureField<T>,
    pub diagnostics: Diagnostics<T>,
}

/// Monotonicity of the recorded energy, monitored but never enforced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport<T> {
    /// Consecutive snapshot pairs whose energy rose by more than
    /// [`ENERGY_SLACK`] relative.
    pub increases: usize,
    /// Largest relative rise between consecutive snapshots (≤ 0 if none).
    pub max_relative_increase: T,
}

impl<T: Real> EnergyReport<T> {
    pub fn is_monotone(&self) -> bool {
        self.increases == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub grid: Grid<T>,
    pub snapshots: Vec<Snapshot<T>>,
    /// Squared curvature error at every step when a reference is tracked.
    pub err_series: Option<Vec<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn last(&self) -> Option<&Snapshot<T>> {
        self.snapshots.last()
    }

    /// Maximum tracked error over steps `m ≥ 1`.
    pub fn max_err(&self) -> Option<T> {
        self.err_series
            .as_ref()
            .map(|s| s.iter().skip(1).copied().fold(T::zero(), T::max))
    }

    pub fn energy_report(&self) -> EnergyReport<T> {
        let slack = lit::<T>(ENERGY_SLACK);
        let mut increases = 0;
        let mut worst = T::neg_infinity();
        for w in self.snapshots.windows(2) {
            let (prev, next) = (w[0].diagnostics.energy, w[1].diagnostics.energy);
            let rel = (next - prev) / prev.abs();
            worst = worst.max(rel);
            if rel > slack {
                increases += 1;
            }
        }
        EnergyReport {
            increases,
            max_relative_increase: worst,
        }
    }

    /// Distinct rotation indices seen across snapshots (planar runs only).
    pub fn rotation_indices(&self) -> Vec<i64> {
        let mut seen: Vec<i64> = self
            .snapshots
            .iter()
            .filter_map(|s| s.diagnostics.rotation_index)
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    }
}

/// A run that stopped early; the trajectory up to the last good step is kept.
#[derive(Debug, Clone)]
pub struct RunFailure<T> {
    /// Index of the step that could not be completed (`m + 1`), 0 for setup.
    pub step: usize,
    pub error: Error,
    pub partial: Trajectory<T>,
    pub last_state: Option<(CurveState<T>, CurvatureField<T>)>,
}

impl<T: Real> fmt::Display for RunFailure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "run failed at step {}: {}", self.step, self.error)
    }
}

impl<T: Real> std::error::Error for RunFailure<T> {}

/// Advances `(x^{(m)}, y^{(m)})` by one time step.
pub fn step<T: Real>(
    x: &CurveState<T>,
    y: &CurvatureField<T>,
    params: &SchemeParams<T>,
    grid: &Grid<T>,
) -> Result<(CurveState<T>, CurvatureField<T>)> {
    let sys = assemble(x, y, params, grid)?;
    let (x_next, y_next) = linsolve::solve(&sys)?;
    match edge_lengths(&x_next) {
        Ok(_) => Ok((x_next, y_next)),
        Err(Error::DegenerateMesh {
            edge,
            length,
            threshold,
        }) => Err(Error::MeshCollapse {
            edge,
            length,
            threshold,
        }),
        Err(e) => Err(e),
    }
}

/// Energy, length, mesh ratio and (in the plane) rotation index.
///
/// The Dirichlet scheme reports `½∫I_h(|y|²)|x_u| + λ/2 ∫|x_u|²`; the
/// extended scheme reports `½∫I_h(|y|²)|x_u| + λ̃ L + ε/2 ∫|x_u|²`.
pub fn diagnostics<T: Real>(
    x: &CurveState<T>,
    y: &CurvatureField<T>,
    params: &SchemeParams<T>,
    grid: &Grid<T>,
) -> Result<Diagnostics<T>> {
    let parts = energy_parts(x, y, grid)?;
    let q = edge_lengths(x)?;
    let (energy, monitor) = match &params.variant {
        Variant::Dirichlet { lambda } => (parts.bending + *lambda * parts.dirichlet, None),
        Variant::Extended {
            lambda_tilde,
            epsilon,
            monitor,
        } => {
            let m = monitor.nodal_values(x.iter())?;
            let half = lit::<T>(0.5);
            let weighted = q
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (k, &qk)| acc + qk * half * (m[k] + m[(k + 1) % m.len()]));
            (
                parts.bending + *lambda_tilde * parts.length + *epsilon * parts.dirichlet,
                Some(weighted / parts.length),
            )
        }
    };
    let rotation = if x.dim() == 2 {
        Some(rotation_index(x)?)
    } else {
        None
    };
    Ok(Diagnostics {
        energy,
        length: parts.length,
        sigma: length_ratio(&q),
        err: None,
        rotation_index: rotation,
        monitor,
    })
}

struct Tracker<T> {
    exact: ExactCircleCurvature<T>,
    series: Vec<T>,
}

/// Samples the preset, computes the initial curvature and performs all
/// `m_T` steps, recording every `record_stride` steps and the final one.
pub fn run<T: Real>(cfg: &RunConfig<T>) -> std::result::Result<Trajectory<T>, Box<RunFailure<T>>> {
    let setup_failure = |error: Error, grid: Grid<T>| {
        Box::new(RunFailure {
            step: 0,
            error,
            partial: Trajectory {
                grid,
                snapshots: Vec::new(),
                err_series: None,
            },
            last_state: None,
        })
    };
    let grid = Grid::uniform(cfg.vertices).map_err(|e| {
        setup_failure(
            e,
            Grid::from_nodes(vec![T::zero(), T::one(), lit(2.0), T::TAU()]).expect("placeholder grid"),
        )
    })?;
    let mut traj = Trajectory {
        grid: grid.clone(),
        snapshots: Vec::new(),
        err_series: None,
    };

    let init = (|| {
        cfg.validate()?;
        let x0 = sample_preset(&cfg.preset, &grid, cfg.dim)?;
        let y0 = init_curvature(&x0, &grid)?;
        let tracker = if cfg.circle_reference {
            let lambda = match cfg.params.variant {
                Variant::Dirichlet { lambda } => lambda,
                Variant::Extended { .. } => unreachable!("validated above"),
            };
            let r0 = match cfg.preset {
                Preset::Circle { radius } => radius,
                _ => unreachable!("validated above"),
            };
            let ode = circle_radius_ode(OdeVariant::Dirichlet { lambda }, r0, cfg.t_final, cfg.steps)?;
            Some(Tracker {
                exact: exact_circle_curvature(&ode, &cfg.preset, &grid, cfg.dim)?,
                series: Vec::with_capacity(cfg.steps + 1),
            })
        } else {
            None
        };
        Ok::<_, Error>((x0, y0, tracker))
    })();
    let (mut x, mut y, mut tracker) = init.map_err(|e| setup_failure(e, grid.clone()))?;

    let record = |traj: &mut Trajectory<T>,
                  m: usize,
                  x: &CurveState<T>,
                  y: &CurvatureField<T>,
                  err: Option<T>|
     -> Result<()> {
        let mut diag = diagnostics(x, y, &cfg.params, &grid)?;
        diag.err = err;
        traj.snapshots.push(Snapshot {
            step: m,
            t: x.t,
            state: x.clone(),
            curvature: y.clone(),
            diagnostics: diag,
        });
        Ok(())
    };

    let fail = |traj: Trajectory<T>, tracker: Option<Tracker<T>>, step, error, last| {
        let mut partial = traj;
        partial.err_series = tracker.map(|t| t.series);
        Box::new(RunFailure {
            step,
            error,
            partial,
            last_state: last,
        })
    };

    let err0 = match tracker.as_mut() {
        Some(t) => match lumped_error_sq(&t.exact.at(0), &y) {
            Ok(e) => {
                t.series.push(e);
                Some(e)
            }
            Err(e) => return Err(fail(traj, tracker, 0, e, Some((x, y)))),
        },
        None => None,
    };
    if let Err(e) = record(&mut traj, 0, &x, &y, err0) {
        return Err(fail(traj, tracker, 0, e, Some((x, y))));
    }

    for m in 1..=cfg.steps {
        let (mut x_next, y_next) = match step(&x, &y, &cfg.params, &grid) {
            Ok(pair) => pair,
            Err(e) => return Err(fail(traj, tracker, m, e, Some((x, y)))),
        };
        x_next.t = from_usize::<T>(m) * cfg.params.delta;
        let err = match tracker.as_mut() {
            Some(t) => match lumped_error_sq(&t.exact.at(m), &y_next) {
                Ok(e) => {
                    t.series.push(e);
                    Some(e)
                }
                Err(e) => return Err(fail(traj, tracker, m, e, Some((x, y)))),
            },
            None => None,
        };
        x = x_next;
        y = y_next;
        if m % cfg.record_stride == 0 || m == cfg.steps {
            if let Err(e) = record(&mut traj, m, &x, &y, err) {
                return Err(fail(traj, tracker, m, e, Some((x, y))));
            }
        }
    }
    traj.err_series = tracker.map(|t| t.series);
    Ok(traj)
}

/// Runs the Dirichlet scheme from a circle of radius `r0` with `m_T = N²`
/// steps and returns the maximal squared curvature error.
pub fn circle_sample<T: Real>(
    vertices: usize,
    dim: usize,
    lambda: T,
    r0: T,
    t_final: T,
) -> Result<ConvergenceSample<T>> {
    let steps = vertices * vertices;
    let cfg = RunConfig::with_steps(
        vertices,
        dim,
        Preset::Circle { radius: r0 },
        Variant::Dirichlet { lambda },
        t_final,
        steps,
    )?
    .record_stride(steps)
    .track_circle_error();
    let traj = run(&cfg).map_err(|f| f.error)?;
    let err = traj.max_err().ok_or(Error::NonFinite("curvature error"))?;
    Ok(ConvergenceSample {
        vertices,
        steps,
        delta: cfg.delta(),
        err,
    })
}

/// Convergence table over increasing vertex counts, `m_T = N²` each.
pub fn converge_circle<T: Real>(
    vertex_counts: &[usize],
    dim: usize,
    lambda: T,
    r0: T,
    t_final: T,
) -> Result<EocTable<T>> {
    let samples = vertex_counts
        .iter()
        .map(|&n| circle_sample(n, dim, lambda, r0, t_final))
        .collect::<Result<Vec<_>>>()?;
    eoc_table(&samples)
}
