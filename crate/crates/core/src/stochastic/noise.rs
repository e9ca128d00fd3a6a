use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dynamics::{cavity_exact_step, CavityKick, ModeOverlap};
use crate::error::{Error, Result};
use crate::model::PhysicalParams;

pub type NoiseRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> NoiseRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    /// Independent real and imaginary increments, each carrying half the
    /// variance.
    #[default]
    ComplexIsotropic,
    /// Increment on the real quadrature only.
    RealOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub epsilon: f64,
    pub seed: u64,
    #[serde(default)]
    pub kind: NoiseKind,
}

impl NoiseConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            seed,
            kind: NoiseKind::ComplexIsotropic,
        }
    }

    pub fn with_kind(mut self, kind: NoiseKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::invalid(format!(
                "noise epsilon must lie in [0, 1] (got {})",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Gaussian increment with mean 0 and variance `dt`.
pub fn wiener_increment(rng: &mut NoiseRng, dt: f64) -> Result<f64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!("Wiener increment needs dt > 0 (got {dt})")));
    }
    let z: f64 = StandardNormal.sample(rng);
    Ok(z * dt.sqrt())
}

fn complex_increment(rng: &mut NoiseRng, dt: f64, kind: NoiseKind) -> Complex64 {
    let sd = dt.sqrt();
    match kind {
        NoiseKind::ComplexIsotropic => {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im) * (sd * std::f64::consts::FRAC_1_SQRT_2)
        }
        NoiseKind::RealOnly => {
            let re: f64 = StandardNormal.sample(rng);
            Complex64::new(re * sd, 0.0)
        }
    }
}

/// One exponential Euler–Maruyama step of a single cavity mode with frozen
/// overlaps. For ε = 0 this is exactly [`cavity_exact_step`].
pub fn noisy_cavity_step(
    alpha: Complex64,
    overlap: ModeOverlap,
    params: &PhysicalParams,
    dt: f64,
    epsilon: f64,
    kind: NoiseKind,
    rng: &mut NoiseRng,
) -> Result<Complex64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!("cavity step needs dt > 0 (got {dt})")));
    }
    let drift = cavity_exact_step(alpha, overlap, params, dt);
    if epsilon == 0.0 {
        return Ok(drift);
    }
    let amp = (2.0 * epsilon * params.kappa).sqrt();
    Ok(drift + amp * complex_increment(rng, dt, kind))
}

/// Independent noise on both cavity modes, fed to the stepper once per step.
#[derive(Debug, Clone)]
pub struct CavityNoise {
    rng: NoiseRng,
    amplitude: f64,
    kind: NoiseKind,
}

impl CavityNoise {
    pub fn new(params: &PhysicalParams, noise: &NoiseConfig, seed: u64) -> Self {
        Self {
            rng: rng_from_seed(seed),
            amplitude: (2.0 * noise.epsilon * params.kappa).sqrt(),
            kind: noise.kind,
        }
    }
}

impl CavityKick for CavityNoise {
    fn kick(&mut self, dt: f64) -> [Complex64; 2] {
        if self.amplitude == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        let a = complex_increment(&mut self.rng, dt, self.kind);
        let b = complex_increment(&mut self.rng, dt, self.kind);
        [self.amplitude * a, self.amplitude * b]
    }
}
