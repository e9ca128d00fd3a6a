//! Measurement back-action as additive white noise on the cavity fields, and
//! seeded trajectory ensembles.
//!
//! With homodyne efficiency ε the cavity equation picks up
//! dα = (…)dt + √(2εκ) dW, integrated by exponential Euler–Maruyama: the
//! deterministic part is propagated exactly and the increment added after.

mod ensemble;
mod noise;

pub use ensemble::{run_ensemble, TrajectoryEnsemble, ENSEMBLE_FAILURE_LIMIT};
pub use noise::{
    noisy_cavity_step, rng_from_seed, wiener_increment, CavityNoise, NoiseConfig, NoiseKind,
    NoiseRng,
};
