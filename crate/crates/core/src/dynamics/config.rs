use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Kinetic (spectral) / cavity (exact exponential) / pointwise potential,
    /// composed symmetrically. Second order in dt.
    #[default]
    StrangSplit,
    /// Classical RK4 on the full atom + cavity vector.
    Rk4Monolithic,
}

/// How the cavity light shift enters the spin dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LightShift {
    /// Each component feels the potential of its own cavity mode.
    #[default]
    Differential,
    /// Both components feel the spin-averaged potential (V₁ + V₂)/2: the
    /// spin drive is assumed to follow the light-shifted resonance.
    Compensated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepConfig {
    pub dt: f64,
    #[serde(default)]
    pub scheme: Scheme,
    pub record_every: usize,
    /// Keep U0⟨cos²⟩ in the cavity equation. Switching it off reproduces the
    /// approximations behind the closed-form cavity solutions.
    #[serde(default = "yes")]
    pub dispersive_shift: bool,
    #[serde(default)]
    pub light_shift: LightShift,
}

fn yes() -> bool {
    true
}

/// Per-step relative norm drift that aborts integration.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-6;

/// Upper bound on dt times the fastest coherent rate.
pub const STIFFNESS_LIMIT: f64 = 0.1;

impl StepConfig {
    /// dt = min(0.05/(|Δc| + N|U0|), 0.05/κ, 0.01/max(Ω, 1)).
    pub fn default_dt(params: &PhysicalParams) -> f64 {
        let cavity = params.delta_c.abs() + params.n_atoms * params.u0.abs();
        let mut dt = 0.01 / params.rabi_frequency().max(1.0);
        if cavity > 0.0 {
            dt = dt.min(0.05 / cavity);
        }
        dt.min(0.05 / params.kappa)
    }

    pub fn for_params(params: &PhysicalParams) -> Self {
        Self {
            dt: Self::default_dt(params),
            scheme: Scheme::StrangSplit,
            record_every: 1,
            dispersive_shift: true,
            light_shift: LightShift::Differential,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_record_every(mut self, n: usize) -> Self {
        self.record_every = n;
        self
    }

    pub fn with_light_shift(mut self, ls: LightShift) -> Self {
        self.light_shift = ls;
        self
    }

    pub fn with_dispersive_shift(mut self, on: bool) -> Self {
        self.dispersive_shift = on;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self, params: &PhysicalParams) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(format!("dt must be positive (got {})", self.dt)));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record_every must be >= 1"));
        }
        let product = self.dt * params.stiff_rate();
        if product > STIFFNESS_LIMIT {
            return Err(Error::StiffnessGuard { dt: self.dt, product });
        }
        Ok(())
    }
}
