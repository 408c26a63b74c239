//! Linear systems of the two semi-implicit schemes and the initial curvature.

mod assemble;
mod curvature;
mod params;
mod system;

pub use assemble::{assemble, assemble_step, assemble_step_extended, assemble_terms, Terms};
pub use curvature::init_curvature;
pub use params::{Monitor, MonitorTable, SchemeParams, Variant};
pub use system::LinearSystem;
