use serde::{Deserialize, Serialize};

use super::config::StepConfig;
use super::stepper::{CavityKick, Stepper};
use crate::error::{Error, Result};
use crate::model::{PhysicalParams, SystemState};

/// Sampled observables along one trajectory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    /// δN = N₁ − N₂.
    pub delta_atoms: Vec<f64>,
    pub n1: Vec<f64>,
    pub n2: Vec<f64>,
    /// δn = |α₁|² − |α₂|².
    pub delta_photons: Vec<f64>,
    /// arg ∫ψ₁ψ₂* dx.
    pub phase: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Channel {
    DeltaAtoms,
    N1,
    N2,
    DeltaPhotons,
    Phase,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn push(&mut self, state: &SystemState) {
        let (n1, n2) = state.photon_numbers();
        self.t.push(state.time);
        self.delta_atoms.push(state.imbalance());
        self.n1.push(n1);
        self.n2.push(n2);
        self.delta_photons.push(n1 - n2);
        self.phase.push(state.relative_phase());
    }

    pub fn channel(&self, c: Channel) -> &[f64] {
        match c {
            Channel::DeltaAtoms => &self.delta_atoms,
            Channel::N1 => &self.n1,
            Channel::N2 => &self.n2,
            Channel::DeltaPhotons => &self.delta_photons,
            Channel::Phase => &self.phase,
        }
    }

    pub(crate) fn channel_mut(&mut self, c: Channel) -> &mut Vec<f64> {
        match c {
            Channel::DeltaAtoms => &mut self.delta_atoms,
            Channel::N1 => &mut self.n1,
            Channel::N2 => &mut self.n2,
            Channel::DeltaPhotons => &mut self.delta_photons,
            Channel::Phase => &mut self.phase,
        }
    }

    /// Samples with t ≥ `t_start`.
    pub fn after(&self, t_start: f64) -> TimeSeries {
        let i = self.t.partition_point(|&t| t < t_start);
        TimeSeries {
            t: self.t[i..].to_vec(),
            delta_atoms: self.delta_atoms[i..].to_vec(),
            n1: self.n1[i..].to_vec(),
            n2: self.n2[i..].to_vec(),
            delta_photons: self.delta_photons[i..].to_vec(),
            phase: self.phase[i..].to_vec(),
        }
    }
}

pub const CHANNELS: [Channel; 5] = [
    Channel::DeltaAtoms,
    Channel::N1,
    Channel::N2,
    Channel::DeltaPhotons,
    Channel::Phase,
];

/// Number of whole steps that reach `t_final` from `t0` (nearest integer).
pub fn steps_to(t0: f64, t_final: f64, dt: f64) -> Result<usize> {
    if !(t_final.is_finite() && t_final >= t0) {
        return Err(Error::invalid(format!(
            "t_final ({t_final}) must not precede the state time ({t0})"
        )));
    }
    Ok(((t_final - t0) / dt).round() as usize)
}

/// Integrates from `state.time` to `t_final` and samples every
/// `cfg.record_every` steps; the initial state is always the first sample.
pub fn evolve(
    state: &SystemState,
    params: &PhysicalParams,
    cfg: &StepConfig,
    t_final: f64,
) -> Result<(TimeSeries, SystemState)> {
    let mut stepper = Stepper::new(state.grid.clone(), params, cfg)?;
    let mut s = state.clone();
    let series = evolve_with(&mut stepper, &mut s, t_final, None)?;
    Ok((series, s))
}

/// Like [`evolve`] but with a caller-owned stepper and optional cavity noise.
pub fn evolve_with(
    stepper: &mut Stepper,
    state: &mut SystemState,
    t_final: f64,
    mut kick: Option<&mut dyn CavityKick>,
) -> Result<TimeSeries> {
    let n = steps_to(state.time, t_final, stepper.dt())?;
    let every = stepper.config().record_every;
    let t0 = state.time;
    let dt = stepper.dt();
    let mut series = TimeSeries::default();
    series.push(state);
    for i in 1..=n {
        match kick {
            Some(ref mut k) => stepper.step_with(state, Some(&mut **k))?,
            None => stepper.step(state)?,
        }
        // Accumulated time drifts by rounding; pin it to the step grid.
        state.time = t0 + i as f64 * dt;
        if i % every == 0 {
            series.push(state);
        }
    }
    Ok(series)
}
