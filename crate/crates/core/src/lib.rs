//! Mean-field simulator and metrology toolkit for a spinor condensate in a
//! transversely pumped two-mode cavity used as a magnetometer.
//!
//! The crate is organised as
//!
//! - [`model`]: units, parameters, grid and state;
//! - [`dynamics`]: the deterministic integrator, pulses and preparation;
//! - [`stochastic`]: measurement back-action and trajectory ensembles;
//! - [`protocols`]: Ramsey and Rabi experiments and field estimators;
//! - [`analytics`]: closed-form cavity solutions, sensitivities and fits;
//! - [`effective`]: the map from four-level couplings to model constants.

pub mod analytics;
pub mod dynamics;
pub mod error;
pub mod effective;
pub mod model;
pub mod protocols;
pub mod stochastic;

pub use error::{Error, Result};
