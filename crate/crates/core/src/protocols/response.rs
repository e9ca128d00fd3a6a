use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::analytics::{oscillation_amplitude, phase_lag};
use crate::dynamics::{evolve, relax_ordered, RelaxConfig, StepConfig, TimeSeries};
use crate::error::{Error, Result};
use crate::model::{spin_coherent_state, Grid, PhysicalParams};

use super::record::PREP_SEED;

/// Photon response to a resonant Rabi drive measured from the dynamics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrivenResponse {
    pub omega: f64,
    /// Lag of δn behind δN at Ω, in [0, π].
    pub lag: f64,
    /// Amplitude of δn at Ω [photons].
    pub amplitude: f64,
    /// Time series after the discarded transient.
    pub series: TimeSeries,
}

/// Transient discarded before the response is read off, in units of 1/κ.
pub const TRANSIENT_KAPPA_TIMES: f64 = 5.0;

/// Drives the ordered state (all atoms in component 1) at Rabi frequency
/// `omega` on resonance and measures δn against δN over `periods` periods
/// after a 5/κ transient. The step and relaxation settings (light shift,
/// dispersive shift) are taken from the arguments; dt is shrunk if the
/// drive needs it.
pub fn driven_response(
    params: &PhysicalParams,
    grid: Arc<Grid>,
    step: &StepConfig,
    relax: &RelaxConfig,
    omega: f64,
    periods: f64,
) -> Result<DrivenResponse> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::invalid(format!("drive frequency must be positive (got {omega})")));
    }
    if !(periods > 0.0 && periods.is_finite()) {
        return Err(Error::invalid(format!("periods must be positive (got {periods})")));
    }
    let p = params.with_rabi_frequency(omega).with_rabi_resonance();
    let cfg = StepConfig {
        dt: step.dt.min(StepConfig::default_dt(&p)),
        ..*step
    };
    let seed = spin_coherent_state(&p, grid, PREP_SEED, 0.0, 0.0)?;
    let start = relax_ordered(&seed, &p, relax)?;
    let skip = TRANSIENT_KAPPA_TIMES / p.kappa;
    let (series, _) = evolve(&start, &p, &cfg, skip + periods * 2.0 * PI / omega)?;
    let series = series.after(skip);
    let lag = phase_lag(&series.t, &series.delta_atoms, &series.delta_photons, omega)?;
    let amplitude = oscillation_amplitude(&series.t, &series.delta_photons, omega)?;
    Ok(DrivenResponse {
        omega,
        lag,
        amplitude,
        series,
    })
}
