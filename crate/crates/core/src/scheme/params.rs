use crate::error::{Error, Result};
use crate::num::{lit, to_f64, Real};

/// Positive weight `M: R^n -> (0, ∞)` in the monitor-weighted Dirichlet term.
#[derive(Debug, Clone, PartialEq)]
pub enum Monitor<T> {
    Constant(T),
    /// `M(ξ) = 1 + (ξ_1 - 1)² / 10`.
    LemniscateQuadratic,
    Tabulated(MonitorTable<T>),
}

/// Piecewise linear table in one ambient coordinate, constant beyond the
/// first and last knot.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorTable<T> {
    axis: usize,
    knots: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> MonitorTable<T> {
    pub fn new(axis: usize, knots: Vec<T>, values: Vec<T>) -> Result<Self> {
        if knots.is_empty() || knots.len() != values.len() {
            return Err(Error::param("monitor", "table needs matching, non-empty knots and values"));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::param("monitor", "table knots must increase strictly"));
        }
        if values.iter().any(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(Error::param("monitor", "table values must be positive"));
        }
        Ok(MonitorTable { axis, knots, values })
    }

    fn eval(&self, xi: &[T]) -> T {
        let s = xi.get(self.axis).copied().unwrap_or_else(T::zero);
        let last = self.knots.len() - 1;
        if s <= self.knots[0] {
            return self.values[0];
        }
        if s >= self.knots[last] {
            return self.values[last];
        }
        let i = self.knots.partition_point(|&k| k <= s);
        let (k0, k1) = (self.knots[i - 1], self.knots[i]);
        let w = (s - k0) / (k1 - k0);
        self.values[i - 1] * (T::one() - w) + self.values[i] * w
    }
}

impl<T: Real> Monitor<T> {
    pub fn eval(&self, xi: &[T]) -> T {
        match self {
            Monitor::Constant(c) => *c,
            Monitor::LemniscateQuadratic => {
                let s = xi[0] - T::one();
                T::one() + s * s / lit(10.0)
            }
            Monitor::Tabulated(table) => table.eval(xi),
        }
    }

    /// Nodal values `M(x_j)`, rejecting non-positive ones.
    pub fn nodal_values<'a, I>(&self, vertices: I) -> Result<Vec<T>>
    where
        I: IntoIterator<Item = &'a [T]>,
    {
        vertices
            .into_iter()
            .enumerate()
            .map(|(vertex, xi)| {
                let m = self.eval(xi);
                if m > T::zero() && m.is_finite() {
                    Ok(m)
                } else {
                    Err(Error::InvalidMonitor {
                        vertex,
                        value: to_f64(m),
                    })
                }
            })
            .collect()
    }
}

/// Which flow a step discretizes.
#[derive(Debug, Clone, PartialEq)]
pub enum Variant<T> {
    /// Elastic energy plus `λ` times the Dirichlet energy.
    Dirichlet { lambda: T },
    /// Elastic energy plus `λ̃` times length, with tangential velocity
    /// weighted by `ε` and an `ε`-scaled monitor-weighted Dirichlet term.
    Extended {
        lambda_tilde: T,
        epsilon: T,
        monitor: Monitor<T>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeParams<T> {
    pub variant: Variant<T>,
    pub delta: T,
}

fn positive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {}", to_f64(v))))
    }
}

impl<T: Real> SchemeParams<T> {
    pub fn dirichlet(lambda: T, delta: T) -> Self {
        SchemeParams {
            variant: Variant::Dirichlet { lambda },
            delta,
        }
    }

    pub fn extended(lambda_tilde: T, epsilon: T, monitor: Monitor<T>, delta: T) -> Self {
        SchemeParams {
            variant: Variant::Extended {
                lambda_tilde,
                epsilon,
                monitor,
            },
            delta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("delta", self.delta)?;
        match &self.variant {
            Variant::Dirichlet { lambda } => positive("lambda", *lambda),
            Variant::Extended {
                lambda_tilde,
                epsilon,
                monitor,
            } => {
                positive("lambda_tilde", *lambda_tilde)?;
                positive("epsilon", *epsilon)?;
                if let Monitor::Constant(c) = monitor {
                    positive("monitor", *c)?;
                }
                Ok(())
            }
        }
    }

    pub fn is_extended(&self) -> bool {
        matches!(self.variant, Variant::Extended { .. })
    }
}
