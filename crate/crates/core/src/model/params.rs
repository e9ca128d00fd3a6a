use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Recoil frequency of 87Rb at a 780 nm pump, in rad/s.
pub const RB87_RECOIL: f64 = 2.0 * PI * 3.77e3;

/// Gyromagnetic ratio 2π × 7 Hz/nT expressed in rad s⁻¹ T⁻¹.
pub const RB87_GYRO: f64 = 2.0 * PI * 7.0e9;

/// Model constants. Rates are in units of the recoil frequency ω_r,
/// fields in tesla, and `omega_r_hz` anchors the conversion to rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalParams {
    /// Pump-cavity detuning Δc.
    pub delta_c: f64,
    /// Light shift per photon U0.
    pub u0: f64,
    /// Effective pump strength η0.
    pub eta0: f64,
    /// Cavity field decay rate κ.
    pub kappa: f64,
    pub n_atoms: f64,
    /// Stark-shifted two-photon detuning δ.
    pub delta: f64,
    pub b_parallel: f64,
    pub b_perp: f64,
    /// Frequency of the ac field, ω.
    pub omega_ac: f64,
    pub gamma_gyro: f64,
    pub omega_r_hz: f64,
    /// Homodyne measurement efficiency ε.
    pub epsilon: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::figure2()
    }
}

impl PhysicalParams {
    /// The reference operating point: (Δc, U0, η0, κ) = (−3300, −1/600, 300, 300) ω_r
    /// with N = 10⁴ atoms, no fields applied.
    pub fn figure2() -> Self {
        Self {
            delta_c: -3300.0,
            u0: -1.0 / 600.0,
            eta0: 300.0,
            kappa: 300.0,
            n_atoms: 1.0e4,
            delta: 0.0,
            b_parallel: 0.0,
            b_perp: 0.0,
            omega_ac: 0.0,
            gamma_gyro: RB87_GYRO,
            omega_r_hz: RB87_RECOIL,
            epsilon: 0.0,
        }
    }

    /// Collects every violated invariant instead of stopping at the first.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let fields = [
            ("delta_c", self.delta_c),
            ("u0", self.u0),
            ("eta0", self.eta0),
            ("kappa", self.kappa),
            ("n_atoms", self.n_atoms),
            ("delta", self.delta),
            ("b_parallel", self.b_parallel),
            ("b_perp", self.b_perp),
            ("omega_ac", self.omega_ac),
            ("gamma_gyro", self.gamma_gyro),
            ("omega_r_hz", self.omega_r_hz),
            ("epsilon", self.epsilon),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                errs.push(format!("{name} must be finite (got {v})"));
            }
        }
        if !(self.kappa > 0.0) {
            errs.push(format!("kappa must be > 0 (got {})", self.kappa));
        }
        if !(self.n_atoms > 0.0) {
            errs.push(format!("n_atoms must be > 0 (got {})", self.n_atoms));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            errs.push(format!("epsilon must lie in [0, 1] (got {})", self.epsilon));
        }
        if !(self.omega_r_hz > 0.0) {
            errs.push(format!("omega_r_hz must be > 0 (got {})", self.omega_r_hz));
        }
        let rabi = self.rabi_frequency();
        if !(rabi.is_finite() && rabi >= 0.0) {
            errs.push(format!("derived Rabi frequency must be finite and >= 0 (got {rabi})"));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }

    /// Ω = γ B⊥ in recoil units.
    pub fn rabi_frequency(&self) -> f64 {
        self.gamma_gyro * self.b_perp / self.omega_r_hz
    }

    /// γ B∥ in recoil units.
    pub fn larmor_rate(&self) -> f64 {
        self.gamma_gyro * self.b_parallel / self.omega_r_hz
    }

    /// κ in s⁻¹.
    pub fn kappa_lab(&self) -> f64 {
        self.kappa * self.omega_r_hz
    }

    /// Converts a duration in seconds to recoil time units.
    pub fn to_recoil_time(&self, seconds: f64) -> f64 {
        seconds * self.omega_r_hz
    }

    pub fn to_seconds(&self, recoil_time: f64) -> f64 {
        recoil_time / self.omega_r_hz
    }

    /// Sets B⊥ such that Ω equals `omega` (recoil units).
    pub fn with_rabi_frequency(mut self, omega: f64) -> Self {
        self.b_perp = omega * self.omega_r_hz / self.gamma_gyro;
        self
    }

    /// Chooses ω so that −γB∥ − ω = δ holds exactly.
    pub fn with_rabi_resonance(mut self) -> Self {
        self.omega_ac = -self.larmor_rate() - self.delta;
        self
    }

    /// Field strength (T) whose Larmor rate γB equals `rate` (recoil units).
    pub fn field_for_rate(&self, rate: f64) -> f64 {
        rate * self.omega_r_hz / self.gamma_gyro
    }

    /// Largest coherent rate entering the stiffness guard.
    pub(crate) fn stiff_rate(&self) -> f64 {
        let cavity = self.delta_c.abs() + self.n_atoms * self.u0.abs();
        cavity.max(self.kappa).max(self.rabi_frequency())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure2_is_valid() {
        PhysicalParams::figure2().validate().unwrap();
    }

    #[test]
    fn validation_lists_every_violation() {
        let p = PhysicalParams {
            kappa: 0.0,
            n_atoms: -1.0,
            epsilon: 1.5,
            ..PhysicalParams::figure2()
        };
        match p.validate() {
            Err(Error::InvalidConfig(v)) => assert_eq!(v.len(), 3, "{v:?}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn rabi_frequency_round_trip() {
        let p = PhysicalParams::figure2().with_rabi_frequency(330.0);
        assert!((p.rabi_frequency() - 330.0).abs() < 1e-9);
        assert!(p.b_perp > 0.0);
    }

    #[test]
    fn resonance_condition() {
        let p = PhysicalParams {
            b_parallel: 1e-6,
            delta: 12.0,
            ..PhysicalParams::figure2()
        }
        .with_rabi_resonance();
        assert!((-p.larmor_rate() - p.omega_ac - p.delta).abs() < 1e-9);
    }
}
