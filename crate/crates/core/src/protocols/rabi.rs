use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::record::{poisson_counts, prepare_ordered, PhotonRecord};
use crate::dynamics::{evolve, rotate_in_place, Axis, LightShift, StepConfig};
use crate::error::{Error, Result};
use crate::model::{Grid, PhysicalParams};

/// Largest Ω·δt for which the population is treated as constant over one
/// detection window (a tenth of a Rabi period).
pub const MAX_WINDOW_PHASE: f64 = 2.0 * PI / 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RabiConfig {
    /// Total evolution time t [s].
    pub duration: f64,
    /// Detection window δt [s].
    pub dt_window: f64,
    /// Injected B⊥ [T].
    pub b_true: f64,
    #[serde(default)]
    pub shot_noise: bool,
    /// Seed time t0 [s]: the run starts at δN = N cos(Ω t0).
    #[serde(default)]
    pub t0: f64,
}

impl RabiConfig {
    pub fn new(duration: f64, dt_window: f64, b_true: f64) -> Self {
        Self {
            duration,
            dt_window,
            b_true,
            shot_noise: false,
            t0: 0.0,
        }
    }

    pub fn with_shot_noise(mut self, on: bool) -> Self {
        self.shot_noise = on;
        self
    }

    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    pub fn validate(&self, params: &PhysicalParams) -> Result<()> {
        let mut errs = Vec::new();
        for (name, v) in [("duration", self.duration), ("dt_window", self.dt_window)] {
            if !(v.is_finite() && v > 0.0) {
                errs.push(format!("{name} must be positive (got {v})"));
            }
        }
        if !(self.b_true.is_finite() && self.b_true >= 0.0) {
            errs.push(format!("b_true must be finite and >= 0 (got {})", self.b_true));
        }
        if !self.t0.is_finite() {
            errs.push(format!("t0 must be finite (got {})", self.t0));
        }
        if self.dt_window > self.duration {
            errs.push("dt_window exceeds the run duration".into());
        }
        let window_phase = params.gamma_gyro * self.b_true * self.dt_window;
        if window_phase > MAX_WINDOW_PHASE {
            errs.push(format!(
                "detection window covers {window_phase:.3} rad of the Rabi cycle (limit {MAX_WINDOW_PHASE:.3})"
            ));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }
}

/// Rabi experiment: all atoms start in component 1 of the ordered state,
/// the resonant drive Ω = γB⊥ is on, and photons are counted from both
/// modes in consecutive windows of length δt.
///
/// The drive is held on the light-shifted resonance (both components see
/// the spin-averaged cavity potential); with the literal per-component
/// potential the spin self-traps at these couplings.
pub fn run_rabi<R: Rng + ?Sized>(
    params: &PhysicalParams,
    grid: Arc<Grid>,
    cfg: &RabiConfig,
    rng: &mut R,
) -> Result<PhotonRecord> {
    params.validate()?;
    cfg.validate(params)?;
    let p = PhysicalParams {
        b_perp: cfg.b_true,
        ..*params
    }
    .with_rabi_resonance();
    let omega = p.rabi_frequency();

    let mut state = prepare_ordered(&p, grid, 0.0, 0.0)?;
    // exp(−iHt) of the drive term is a y rotation by Ωt.
    rotate_in_place(&mut state, Axis::Y, omega * p.to_recoil_time(cfg.t0));

    let step = StepConfig::for_params(&p).with_light_shift(LightShift::Compensated);
    let window = p.to_recoil_time(cfg.dt_window);
    let t_end = p.to_recoil_time(cfg.duration);
    let per_window = window / step.dt;
    if per_window < 2.0 {
        return Err(Error::invalid(format!(
            "detection window spans {per_window:.2} integrator steps, need at least 2"
        )));
    }
    let (series, _) = evolve(&state, &p, &step, t_end)?;

    let n_windows = ((series.t[series.len() - 1] - series.t[0]) / window + 1e-9).floor() as usize;
    let mut sums = vec![[0.0f64; 2]; n_windows];
    let mut hits = vec![0usize; n_windows];
    for i in 0..series.len() {
        let k = ((series.t[i] - series.t[0]) / window).floor() as usize;
        if k < n_windows {
            sums[k][0] += series.n1[i];
            sums[k][1] += series.n2[i];
            hits[k] += 1;
        }
    }

    let kdt = p.kappa_lab() * cfg.dt_window;
    let mut samples = Vec::with_capacity(n_windows);
    let mut counts = Vec::with_capacity(n_windows);
    for k in 0..n_windows {
        let mut c = [
            kdt * sums[k][0] / hits[k] as f64,
            kdt * sums[k][1] / hits[k] as f64,
        ];
        if cfg.shot_noise {
            for v in c.iter_mut() {
                *v = poisson_counts(*v, rng)?;
            }
        }
        samples.push(((k as f64 + 0.5) * cfg.dt_window, c[0] - c[1]));
        counts.push(c);
    }
    PhotonRecord::new(samples, counts, cfg.shot_noise)
}
