//! Deterministic integration of the coupled condensate + cavity equations.

mod cavity;
mod config;
mod relax;
mod rotation;
mod series;
mod stepper;

pub use cavity::{
    cavity_exact_step, cavity_fixed_point, cavity_rhs, overlaps, ModeOverlap, Overlaps,
};
pub use config::{LightShift, Scheme, StepConfig, NORM_DRIFT_TOLERANCE, STIFFNESS_LIMIT};
pub use relax::{relax_ordered, RelaxConfig};
pub use rotation::{apply_rotation, rotate_in_place, rotation_matrix, Axis};
pub use series::{evolve, evolve_with, steps_to, Channel, TimeSeries, CHANNELS};
pub use stepper::{step, CavityKick, Stepper};
