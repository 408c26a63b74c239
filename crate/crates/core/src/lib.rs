//! Parametric finite elements for elastic flow of closed curves in the plane
//! and in space, with tangential mesh redistribution driven by the Dirichlet
//! energy.
//!
//! The solver is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases at the crate root fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod flow;
pub mod linsolve;
pub mod mesh;
pub mod num;
pub mod reference;
pub mod scheme;

pub use error::{Error, Result};
pub use num::Real;

pub type Grid = mesh::Grid<f64>;
pub type CurveState = mesh::CurveState<f64>;
pub type CurvatureField = mesh::CurvatureField<f64>;
pub type EdgeData = mesh::EdgeData<f64>;
pub type Diagnostics = mesh::Diagnostics<f64>;
pub type Preset = mesh::Preset<f64>;
pub type SchemeParams = scheme::SchemeParams<f64>;
pub type Variant = scheme::Variant<f64>;
pub type Monitor = scheme::Monitor<f64>;
pub type LinearSystem = scheme::LinearSystem<f64>;
pub type SparseMatrix = linsolve::SparseMatrix<f64>;
pub type RunConfig = flow::RunConfig<f64>;
pub type Trajectory = flow::Trajectory<f64>;
pub type RunFailure = flow::RunFailure<f64>;
pub type CircleOde = reference::CircleOde<f64>;
pub type EocTable = reference::EocTable<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type Grid = crate::mesh::Grid<f32>;
    pub type CurveState = crate::mesh::CurveState<f32>;
    pub type CurvatureField = crate::mesh::CurvatureField<f32>;
    pub type SchemeParams = crate::scheme::SchemeParams<f32>;
    pub type RunConfig = crate::flow::RunConfig<f32>;
    pub type Trajectory = crate::flow::Trajectory<f32>;
}
