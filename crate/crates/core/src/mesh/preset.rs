//! Initial curves sampled by nodal interpolation `x_j = x_0(u_j)`.

use crate::error::{Error, Result};
use crate::mesh::{CurveState, Grid};
use crate::num::{from_usize, lit, Real};

/// Parametrized initial curves.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset<T> {
    /// `R (cos u, sin u)`.
    Circle { radius: T },
    /// Circle of radius `R` with half the vertices packed on the quarter arc
    /// `[π/2, π)` and the rest spread over the remaining three quarters.
    CircleNonequi { radius: T },
    /// Nonsymmetric lemniscate `(cos u + 4) cos u / (1 + sin² u) · (1, sin u)`.
    Lemniscate,
    /// `((R - r) cos u + d cos(k u), (R - r) sin u - d sin(k u), α sin 3u)`
    /// with `k = (R - r) / r`, which must be a positive integer.
    Hypotrochoid {
        fixed_radius: T,
        rolling_radius: T,
        offset: T,
        alpha: T,
    },
    /// Explicit vertex list, vertex-major, one vertex per grid node.
    Nodal { dim: usize, coords: Vec<T> },
}

impl<T: Real> Preset<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Circle { .. } => "circle",
            Preset::CircleNonequi { .. } => "circle-nonequi",
            Preset::Lemniscate => "lemniscate",
            Preset::Hypotrochoid { .. } => "hypotrochoid",
            Preset::Nodal { .. } => "custom-nodal",
        }
    }

    /// Preset with its default shape parameters.
    pub fn by_name(name: &str) -> Result<Self> {
        let info = PresetInfo::lookup(name)?;
        Ok(match info.name {
            "circle" => Preset::Circle {
                radius: lit(info.radius),
            },
            "circle-nonequi" => Preset::CircleNonequi {
                radius: lit(info.radius),
            },
            "lemniscate" => Preset::Lemniscate,
            "hypotrochoid" => Preset::Hypotrochoid {
                fixed_radius: lit(HYPOTROCHOID_FIXED_RADIUS),
                rolling_radius: lit(HYPOTROCHOID_ROLLING_RADIUS),
                offset: lit(HYPOTROCHOID_OFFSET),
                alpha: T::zero(),
            },
            _ => unreachable!("lookup only returns listed presets"),
        })
    }

    /// Smallest ambient dimension the preset needs.
    pub fn natural_dim(&self) -> usize {
        match self {
            Preset::Hypotrochoid { alpha, .. } if !alpha.is_zero() => 3,
            Preset::Nodal { dim, .. } => *dim,
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Preset::Circle { radius } | Preset::CircleNonequi { radius } => {
                if !(*radius > T::zero() && radius.is_finite()) {
                    return Err(Error::param("radius", "must be positive and finite"));
                }
            }
            Preset::Lemniscate => {}
            Preset::Hypotrochoid {
                fixed_radius,
                rolling_radius,
                offset,
                alpha,
            } => {
                if !(*rolling_radius > T::zero()) || !(*fixed_radius > *rolling_radius) {
                    return Err(Error::param(
                        "rolling_radius",
                        "need 0 < rolling_radius < fixed_radius",
                    ));
                }
                let k = (*fixed_radius - *rolling_radius) / *rolling_radius;
                if (k - k.round()).abs() > lit(1e-9) {
                    return Err(Error::param(
                        "fixed_radius",
                        "(fixed_radius - rolling_radius) / rolling_radius must be an integer",
                    ));
                }
                if !offset.is_finite() || !alpha.is_finite() {
                    return Err(Error::NonFinite("hypotrochoid parameters"));
                }
            }
            Preset::Nodal { dim, coords } => {
                if !(2..=3).contains(dim) {
                    return Err(Error::UnsupportedDimension(*dim));
                }
                if coords.len() % dim != 0 || coords.len() / dim < 3 {
                    return Err(Error::param(
                        "points",
                        format!("need at least 3 vertices in R^{dim}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Samples `preset` at the grid nodes, embedding planar presets into `R^dim`
/// with vanishing trailing coordinates.
pub fn sample_preset<T: Real>(preset: &Preset<T>, grid: &Grid<T>, dim: usize) -> Result<CurveState<T>> {
    preset.validate()?;
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if preset.natural_dim() > dim || matches!(preset, Preset::Nodal { dim: d, .. } if *d != dim) {
        return Err(Error::DimensionMismatch(format!(
            "preset `{}` needs dimension {}, requested {dim}",
            preset.name(),
            preset.natural_dim()
        )));
    }
    let n = grid.len();
    let mut coords = vec![T::zero(); n * dim];
    match preset {
        Preset::Circle { radius } => {
            for (j, p) in coords.chunks_exact_mut(dim).enumerate() {
                let u = grid.node(j);
                p[0] = *radius * u.cos();
                p[1] = *radius * u.sin();
            }
        }
        Preset::CircleNonequi { radius } => {
            let dense = n / 2;
            let sparse = n - dense;
            let half_pi = T::FRAC_PI_2();
            for (j, p) in coords.chunks_exact_mut(dim).enumerate() {
                let angle = if j < dense {
                    half_pi + half_pi * from_usize::<T>(j) / from_usize(dense)
                } else {
                    T::PI() + lit::<T>(3.0) * half_pi * from_usize::<T>(j - dense) / from_usize(sparse)
                };
                p[0] = *radius * angle.cos();
                p[1] = *radius * angle.sin();
            }
        }
        Preset::Lemniscate => {
            let four = lit::<T>(4.0);
            for (j, p) in coords.chunks_exact_mut(dim).enumerate() {
                let (s, c) = grid.node(j).sin_cos();
                let scale = (c + four) * c / (T::one() + s * s);
                p[0] = scale;
                p[1] = scale * s;
            }
        }
        Preset::Hypotrochoid {
            fixed_radius,
            rolling_radius,
            offset,
            alpha,
        } => {
            let arm = *fixed_radius - *rolling_radius;
            let k = (arm / *rolling_radius).round();
            let three = lit::<T>(3.0);
            for (j, p) in coords.chunks_exact_mut(dim).enumerate() {
                let u = grid.node(j);
                p[0] = arm * u.cos() + *offset * (k * u).cos();
                p[1] = arm * u.sin() - *offset * (k * u).sin();
                if dim == 3 {
                    p[2] = *alpha * (three * u).sin();
                }
            }
        }
        Preset::Nodal { coords: given, .. } => {
            if given.len() != coords.len() {
                return Err(Error::GridMismatch(format!(
                    "{} nodal points for a grid with {n} vertices",
                    given.len() / dim
                )));
            }
            coords.copy_from_slice(given);
        }
    }
    CurveState::new(dim, T::zero(), coords)
}

pub const HYPOTROCHOID_FIXED_RADIUS: f64 = 3.0;
pub const HYPOTROCHOID_ROLLING_RADIUS: f64 = 0.5;
pub const HYPOTROCHOID_OFFSET: f64 = 4.0;

/// Reference run constants attached to each named preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub radius: f64,
    pub lambda: f64,
    pub vertices: usize,
    pub delta: f64,
    pub t_final: f64,
}

pub const PRESETS: [PresetInfo; 4] = [
    PresetInfo {
        name: "circle",
        summary: "equidistributed circle R(cos u, sin u); shrinks to the stationary radius (2 lambda)^(-1/3)",
        radius: 1.5,
        lambda: 0.5,
        vertices: 60,
        delta: 1.0 / 3600.0,
        t_final: 1.0,
    },
    PresetInfo {
        name: "circle-nonequi",
        summary: "circle with half the vertices on the quarter arc [pi/2, pi), the rest on the remainder",
        radius: 1.5,
        lambda: 0.5,
        vertices: 40,
        delta: 5e-4,
        t_final: 10.0,
    },
    PresetInfo {
        name: "lemniscate",
        summary: "nonsymmetric lemniscate (cos u + 4) cos u / (1 + sin^2 u) (1, sin u)",
        radius: 0.0,
        lambda: 0.1,
        vertices: 100,
        delta: 1e-3,
        t_final: 100.0,
    },
    PresetInfo {
        name: "hypotrochoid",
        summary: "hypotrochoid (R-r) e^{iu} + d e^{-iku} with z = alpha sin 3u; defaults R=3, r=1/2, d=4, alpha=0 (alpha=1/2 in 3D)",
        radius: 0.0,
        lambda: 0.005,
        vertices: 200,
        delta: 0.05,
        t_final: 3000.0,
    },
];

impl PresetInfo {
    pub fn lookup(name: &str) -> Result<&'static PresetInfo> {
        PRESETS
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::UnknownPreset(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::edge_lengths;

    #[test]
    fn circle_starts_on_axis() {
        let g = Grid::<f64>::uniform(12).unwrap();
        let x = sample_preset(&Preset::Circle { radius: 1.5 }, &g, 2).unwrap();
        assert_eq!(x.vertex(0), &[1.5, 0.0]);
        let q = edge_lengths(&x).unwrap();
        assert!(q.iter().all(|&v| (v - q[0]).abs() < 1e-14));
    }

    #[test]
    fn lemniscate_at_zero() {
        let g = Grid::<f64>::uniform(100).unwrap();
        let x = sample_preset(&Preset::Lemniscate, &g, 2).unwrap();
        assert_eq!(x.vertex(0), &[5.0, 0.0]);
    }

    #[test]
    fn nonequi_layout() {
        let g = Grid::<f64>::uniform(40).unwrap();
        let x = sample_preset(&Preset::CircleNonequi { radius: 1.0 }, &g, 2).unwrap();
        let q = edge_lengths(&x).unwrap();
        let short = 2.0 * (std::f64::consts::PI / 80.0).sin();
        let long = 2.0 * (3.0 * std::f64::consts::PI / 80.0).sin();
        assert!(q[..19].iter().all(|&v| (v - short).abs() < 1e-14));
        assert!(q[20..].iter().all(|&v| (v - long).abs() < 1e-14));
        assert!((x.vertex(0)[0]).abs() < 1e-15 && (x.vertex(0)[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hypotrochoid_embedding() {
        let g = Grid::<f64>::uniform(200).unwrap();
        let flat = Preset::by_name("hypotrochoid").unwrap();
        let x = sample_preset(&flat, &g, 2).unwrap();
        assert_eq!(x.vertex(0), &[6.5, 0.0]);
        let lifted = Preset::Hypotrochoid {
            fixed_radius: 3.0,
            rolling_radius: 0.5,
            offset: 4.0,
            alpha: 0.5,
        };
        assert!(sample_preset(&lifted, &g, 2).is_err());
        let x3 = sample_preset(&lifted, &g, 3).unwrap();
        assert!((x3.vertex(50)[2] - 0.5 * (3.0 * g.node(50)).sin()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = Grid::<f64>::uniform(8).unwrap();
        assert!(sample_preset(&Preset::Circle { radius: 0.0 }, &g, 2).is_err());
        assert!(matches!(Preset::<f64>::by_name("spiral"), Err(Error::UnknownPreset(_))));
        let fractional = Preset::Hypotrochoid {
            fixed_radius: 3.0,
            rolling_radius: 0.7,
            offset: 1.0,
            alpha: 0.0,
        };
        assert!(sample_preset(&fractional, &g, 2).is_err());
        let nodal = Preset::Nodal {
            dim: 2,
            coords: vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0],
        };
        assert!(matches!(sample_preset(&nodal, &g, 2), Err(Error::GridMismatch(_))));
    }
}
