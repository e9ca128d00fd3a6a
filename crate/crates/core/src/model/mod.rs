//! Units, parameters, the spatial grid and the mean-field state.
//!
//! Rates are measured in recoil units ω_r = ħk_c²/2M and lengths in 1/k_c,
//! so the kinetic energy of a plane wave e^{ikx} is simply k².

mod grid;
mod params;
mod state;

pub use grid::{make_grid, Grid, Spectral, MIN_POINTS_PER_PERIOD};
pub use params::{PhysicalParams, RB87_GYRO, RB87_RECOIL};
pub use state::{initial_state, pseudo_spin, spin_coherent_state, PseudoSpin, SystemState};
