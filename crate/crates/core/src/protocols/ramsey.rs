use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::record::{
    check_superradiant, poisson_counts, prepare_ordered, require_pump, PhotonRecord,
    SETTLE_KAPPA_TIMES,
};
use crate::dynamics::{evolve, rotate_in_place, Axis, LightShift, StepConfig};
use crate::error::{Error, Result};
use crate::model::{Grid, PhysicalParams, SystemState};

/// How the interrogation phase φ = τγB∥ is accumulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Interrogation {
    /// Exact z rotation by φ.
    #[default]
    Phase,
    /// Real-time evolution with the pump off and only B∥ applied.
    Evolve,
}

/// How the cavity output after the readout pulse is turned into photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RamseyReadout {
    /// Superradiant law |α_j|² = |α0|²(N_j/N)² applied to the populations.
    #[default]
    Law,
    /// Pump switched on and the coupled system evolved until the cavity is
    /// stationary; the final |α_j|² are used.
    Simulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamseyConfig {
    /// Interrogation time τ [s].
    pub tau: f64,
    /// Photon-collection time t [s].
    pub t_meas: f64,
    /// Duration of one experiment t_s [s].
    pub t_cycle: f64,
    /// Injected B∥ [T].
    pub b_true: f64,
    #[serde(default)]
    pub shot_noise: bool,
    #[serde(default)]
    pub readout: RamseyReadout,
    #[serde(default = "y_axis")]
    pub readout_axis: Axis,
    #[serde(default)]
    pub interrogation: Interrogation,
}

fn y_axis() -> Axis {
    Axis::Y
}

impl RamseyConfig {
    pub fn new(tau: f64, t_meas: f64, t_cycle: f64, b_true: f64) -> Self {
        Self {
            tau,
            t_meas,
            t_cycle,
            b_true,
            shot_noise: false,
            readout: RamseyReadout::Law,
            readout_axis: Axis::Y,
            interrogation: Interrogation::Phase,
        }
    }

    pub fn with_shot_noise(mut self, on: bool) -> Self {
        self.shot_noise = on;
        self
    }

    pub fn with_readout(mut self, readout: RamseyReadout) -> Self {
        self.readout = readout;
        self
    }

    pub fn with_interrogation(mut self, mode: Interrogation) -> Self {
        self.interrogation = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        for (name, v) in [("tau", self.tau), ("t_meas", self.t_meas), ("t_cycle", self.t_cycle)] {
            if !(v.is_finite() && v > 0.0) {
                errs.push(format!("{name} must be positive (got {v})"));
            }
        }
        if !self.b_true.is_finite() {
            errs.push(format!("b_true must be finite (got {})", self.b_true));
        }
        if self.tau + self.t_meas > self.t_cycle {
            errs.push(format!(
                "tau + t_meas = {} exceeds t_cycle = {}",
                self.tau + self.t_meas,
                self.t_cycle
            ));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }

    /// φ = τγB∥.
    pub fn phase(&self, params: &PhysicalParams) -> f64 {
        self.tau * params.gamma_gyro * self.b_true
    }
}

/// One Ramsey experiment: prepare |π/2, 0⟩, accumulate φ = τγB∥ with the
/// pump off, apply a π/2 pulse, then collect photons from both modes for
/// t_meas. Returns the one-sample record and the post-readout state.
pub fn run_ramsey<R: Rng + ?Sized>(
    params: &PhysicalParams,
    grid: Arc<Grid>,
    cfg: &RamseyConfig,
    rng: &mut R,
) -> Result<(PhotonRecord, SystemState)> {
    cfg.validate()?;
    params.validate()?;
    let p = PhysicalParams {
        b_parallel: cfg.b_true,
        b_perp: 0.0,
        omega_ac: 0.0,
        ..*params
    };
    let n_ss = require_pump(&p)?;
    let mut state = prepare_ordered(&p, grid, FRAC_PI_2, 0.0)?;

    // Pump off: the cavity empties.
    state.alpha1 = Complex64::new(0.0, 0.0);
    state.alpha2 = Complex64::new(0.0, 0.0);
    match cfg.interrogation {
        Interrogation::Phase => rotate_in_place(&mut state, Axis::Z, cfg.phase(&p)),
        Interrogation::Evolve => state = interrogate(&state, &p, cfg.tau)?,
    }
    state.time = 0.0;
    rotate_in_place(&mut state, cfg.readout_axis, FRAC_PI_2);

    let photons = match cfg.readout {
        RamseyReadout::Law => {
            let (n1, n2) = state.populations();
            let n = n1 + n2;
            [n_ss * (n1 / n).powi(2), n_ss * (n2 / n).powi(2)]
        }
        RamseyReadout::Simulated => {
            let step = StepConfig::for_params(&p)
                .with_light_shift(LightShift::Compensated)
                .with_record_every(usize::MAX);
            let (_, settled) = evolve(&state, &p, &step, SETTLE_KAPPA_TIMES / p.kappa)?;
            state = settled;
            let (a, b) = state.photon_numbers();
            check_superradiant(a + b, n_ss)?;
            [a, b]
        }
    };

    let kt = p.kappa_lab() * cfg.t_meas;
    let mut counts = [kt * photons[0], kt * photons[1]];
    if cfg.shot_noise {
        for c in counts.iter_mut() {
            *c = poisson_counts(*c, rng)?;
        }
    }
    let record = PhotonRecord::new(
        vec![(cfg.tau + cfg.t_meas, counts[0] - counts[1])],
        vec![counts],
        cfg.shot_noise,
    )?;
    Ok((record, state))
}

/// Real-time free precession for `tau` seconds. The pump and cavity are
/// switched off, so only the Zeeman splitting and kinetic energy act.
fn interrogate(state: &SystemState, p: &PhysicalParams, tau: f64) -> Result<SystemState> {
    let dark = PhysicalParams {
        eta0: 0.0,
        u0: 0.0,
        delta_c: 0.0,
        delta: 0.0,
        ..*p
    };
    let t = dark.to_recoil_time(tau);
    let n = (t * dark.kappa / 0.05).ceil().max(1.0);
    let step = StepConfig::for_params(&dark)
        .with_dt(t / n)
        .with_record_every(usize::MAX);
    let mut s = state.clone();
    s.time = 0.0;
    let (_, out) = evolve(&s, &dark, &step, t)?;
    Ok(out)
}

/// Empirical |α0|²: the stationary photon number per |cos φ| from a
/// noiseless simulated readout at zero field.
pub fn calibrate_alpha0(
    params: &PhysicalParams,
    grid: Arc<Grid>,
    cfg: &RamseyConfig,
) -> Result<f64> {
    let cal = RamseyConfig {
        b_true: 0.0,
        shot_noise: false,
        readout: RamseyReadout::Simulated,
        ..*cfg
    };
    // Noiseless: the generator is never drawn from.
    let mut unused = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let (record, _) = run_ramsey(params, grid, &cal, &mut unused)?;
    Ok(record.samples[0].1 / (params.kappa_lab() * cfg.t_meas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::steady_state_photons;
    use crate::model::make_grid;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid() -> Arc<Grid> {
        Arc::new(make_grid(1, 256).unwrap())
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(1)
    }

    #[test]
    fn config_invariants() {
        assert!(RamseyConfig::new(0.01, 0.01, 1.0, 0.0).validate().is_ok());
        assert!(RamseyConfig::new(0.6, 0.6, 1.0, 0.0).validate().is_err());
        assert!(RamseyConfig::new(0.0, 0.01, 1.0, 0.0).validate().is_err());
        assert!(RamseyConfig::new(0.01, 0.01, 1.0, f64::NAN).validate().is_err());
    }

    #[test]
    fn paper_phase() {
        let cfg = RamseyConfig::new(0.01, 0.01, 1.0, 1e-9);
        let phi = cfg.phase(&PhysicalParams::figure2());
        assert!((phi - 2.0 * PI * 0.07).abs() < 1e-12);
        assert!((phi.cos() - 0.9048).abs() < 1e-4);
    }

    #[test]
    fn zero_field_lights_one_mode() {
        let p = PhysicalParams::figure2();
        let cfg = RamseyConfig::new(0.01, 1e-3, 1.0, 0.0);
        let (rec, state) = run_ramsey(&p, grid(), &cfg, &mut rng()).unwrap();
        let full = p.kappa_lab() * 1e-3 * steady_state_photons(&p);
        assert!((rec.samples[0].1 - full).abs() < 1e-9 * full);
        assert!((state.imbalance() - p.n_atoms).abs() < 1e-6 * p.n_atoms);
    }

    #[test]
    fn quarter_phase_balances_modes() {
        let p = PhysicalParams::figure2();
        let b = PI / (2.0 * p.gamma_gyro * 0.01);
        let cfg = RamseyConfig::new(0.01, 1e-3, 1.0, b);
        let (rec, _) = run_ramsey(&p, grid(), &cfg, &mut rng()).unwrap();
        let full = p.kappa_lab() * 1e-3 * steady_state_photons(&p);
        assert!(rec.samples[0].1.abs() < 1e-9 * full);
    }

    #[test]
    fn below_threshold_is_reported() {
        let p = PhysicalParams { eta0: 0.01, ..PhysicalParams::figure2() };
        let cfg = RamseyConfig::new(0.01, 1e-3, 1.0, 0.0);
        let r = run_ramsey(&p, Arc::new(make_grid(1, 32).unwrap()), &cfg, &mut rng());
        assert!(matches!(r, Err(Error::NotSuperradiant { .. })), "{r:?}");
    }
}
