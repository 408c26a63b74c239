//! Parameter grid, curve sampling, per-edge geometry and scalar diagnostics.

mod curve;
mod diagnostics;
mod edge;
mod grid;
mod preset;

pub use curve::{CurvatureField, CurveState};
pub use diagnostics::{discrete_energy, energy_parts, mesh_ratio, rotation_index, Diagnostics, EnergyParts};
pub(crate) use diagnostics::length_ratio;
pub use edge::{edge_lengths, EdgeData, DEGENERACY_RATIO};
pub use grid::Grid;
pub use preset::{
    sample_preset, Preset, PresetInfo, HYPOTROCHOID_FIXED_RADIUS, HYPOTROCHOID_OFFSET,
    HYPOTROCHOID_ROLLING_RADIUS, PRESETS,
};
