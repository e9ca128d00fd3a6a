use serde::{Deserialize, Serialize};

use super::steady::steady_state_photons;
use crate::error::{Error, Result};
use crate::model::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SensitivityScheme {
    Ramsey,
    Rabi,
    SingleMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityInputs {
    pub gamma_gyro: f64,
    /// κ in s⁻¹.
    pub kappa_lab: f64,
    pub alpha0_sq: f64,
    /// Phase-accumulation time (τ for Ramsey, t for Rabi) [s].
    pub interrogation: f64,
    /// Photon-collection time (t for Ramsey, δt for Rabi) [s].
    pub collection: f64,
    pub t_cycle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub scheme: SensitivityScheme,
    /// ΔB·√T [T/√Hz].
    pub bound: f64,
    /// Quantum Fisher information of one experiment at the optimal working
    /// point [T⁻²]; bound = √(t_cycle / qfi).
    pub qfi: f64,
    pub inputs: SensitivityInputs,
}

fn check_times(times: &[(&str, f64)]) -> Result<()> {
    let bad: Vec<String> = times
        .iter()
        .filter(|(_, v)| !(v.is_finite() && *v > 0.0))
        .map(|(n, v)| format!("{n} must be positive (got {v})"))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(bad))
    }
}

fn report(
    scheme: SensitivityScheme,
    params: &PhysicalParams,
    alpha0_sq: f64,
    interrogation: f64,
    collection: f64,
    t_cycle: f64,
) -> SensitivityReport {
    let kappa_lab = params.kappa_lab();
    let slope = params.gamma_gyro * interrogation * (kappa_lab * collection).sqrt() * alpha0_sq.sqrt();
    let qfi = slope * slope;
    SensitivityReport {
        scheme,
        bound: t_cycle.sqrt() / slope,
        qfi,
        inputs: SensitivityInputs {
            gamma_gyro: params.gamma_gyro,
            kappa_lab,
            alpha0_sq,
            interrogation,
            collection,
            t_cycle,
        },
    }
}

/// ΔB∥√T = √t_s / (γτ√(κt)|α0|), with |α0|² from the superradiant steady state.
pub fn sensitivity_ramsey(
    params: &PhysicalParams,
    tau: f64,
    t_meas: f64,
    t_cycle: f64,
) -> Result<SensitivityReport> {
    sensitivity_ramsey_with(params, steady_state_photons(params), tau, t_meas, t_cycle)
}

/// As [`sensitivity_ramsey`] with an externally supplied |α0|².
pub fn sensitivity_ramsey_with(
    params: &PhysicalParams,
    alpha0_sq: f64,
    tau: f64,
    t_meas: f64,
    t_cycle: f64,
) -> Result<SensitivityReport> {
    check_times(&[("tau", tau), ("t_meas", t_meas), ("t_cycle", t_cycle), ("alpha0_sq", alpha0_sq)])?;
    Ok(report(SensitivityScheme::Ramsey, params, alpha0_sq, tau, t_meas, t_cycle))
}

/// ΔB⊥√T = √t_s / (γt√(κδt)|α0|).
pub fn sensitivity_rabi(
    params: &PhysicalParams,
    t: f64,
    dt_window: f64,
    t_cycle: f64,
) -> Result<SensitivityReport> {
    let a2 = steady_state_photons(params);
    check_times(&[("t", t), ("dt_window", dt_window), ("t_cycle", t_cycle), ("alpha0_sq", a2)])?;
    Ok(report(SensitivityScheme::Rabi, params, a2, t, dt_window, t_cycle))
}

/// Ramsey bound when only one cavity mode is detected: twice the two-mode
/// bound.
pub fn sensitivity_single_mode(
    params: &PhysicalParams,
    tau: f64,
    t_meas: f64,
    t_cycle: f64,
) -> Result<SensitivityReport> {
    let two = sensitivity_ramsey(params, tau, t_meas, t_cycle)?;
    Ok(SensitivityReport {
        scheme: SensitivityScheme::SingleMode,
        bound: 2.0 * two.bound,
        qfi: two.qfi / 4.0,
        inputs: two.inputs,
    })
}

/// Cramér-Rao bound from the Fisher information F = (∂α/∂B)².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QfiBound {
    pub fisher: f64,
    pub bound: f64,
}

pub fn qfi_bound(d_alpha_d_b: f64) -> Result<QfiBound> {
    if !d_alpha_d_b.is_finite() {
        return Err(Error::Estimation("non-finite field derivative".into()));
    }
    if d_alpha_d_b == 0.0 {
        return Err(Error::Estimation(
            "zero field derivative: Fisher information vanishes, bound is infinite".into(),
        ));
    }
    let fisher = d_alpha_d_b * d_alpha_d_b;
    Ok(QfiBound {
        fisher,
        bound: 1.0 / fisher.sqrt(),
    })
}

/// Relative-field amplitude models α(B) whose B-derivative sets the QFI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum AmplitudeModel {
    /// α = |α0|√(κt) cos(γBτ).
    Ramsey { alpha0: f64, kappa_t: f64, gamma: f64, tau: f64 },
    /// α = |α0|√(κδt) cos(γBt).
    Rabi { alpha0: f64, kappa_dt: f64, gamma: f64, t: f64 },
    /// α = √(κt)(|α0|/2)(1 + cos γBτ): one mode of the Ramsey readout.
    SingleMode { alpha0: f64, kappa_t: f64, gamma: f64, tau: f64 },
}

impl AmplitudeModel {
    fn parts(&self) -> (f64, f64, f64) {
        // (prefactor, angular rate γτ, offset)
        match *self {
            AmplitudeModel::Ramsey { alpha0, kappa_t, gamma, tau } => {
                (alpha0 * kappa_t.sqrt(), gamma * tau, 0.0)
            }
            AmplitudeModel::Rabi { alpha0, kappa_dt, gamma, t } => {
                (alpha0 * kappa_dt.sqrt(), gamma * t, 0.0)
            }
            AmplitudeModel::SingleMode { alpha0, kappa_t, gamma, tau } => {
                (0.5 * alpha0 * kappa_t.sqrt(), gamma * tau, 1.0)
            }
        }
    }

    pub fn amplitude(&self, b: f64) -> f64 {
        let (a, rate, off) = self.parts();
        a * (off + (rate * b).cos())
    }

    pub fn derivative(&self, b: f64) -> f64 {
        let (a, rate, _) = self.parts();
        -a * rate * (rate * b).sin()
    }

    /// Field producing one radian of phase; the natural scale of B.
    pub fn field_scale(&self) -> f64 {
        1.0 / self.parts().1
    }

    /// Central difference with step 10⁻⁸ of the field scale.
    pub fn finite_difference(&self, b: f64) -> f64 {
        let h = 1e-8 * self.field_scale().max(b.abs());
        (self.amplitude(b + h) - self.amplitude(b - h)) / (2.0 * h)
    }

}

/// Ramsey error propagation Δ[δn]/|∂⟨δn⟩/∂B| for ⟨δn⟩ = κt|α0|² cos(γBτ)
/// and coherent-state noise Δ[δn] = √(κt)|α0|. Infinite at sin φ = 0.
pub fn ramsey_error_propagation(b: f64, alpha0: f64, kappa_t: f64, gamma: f64, tau: f64) -> f64 {
    let noise = kappa_t.sqrt() * alpha0;
    let slope = kappa_t * alpha0 * alpha0 * gamma * tau * (gamma * b * tau).sin().abs();
    noise / slope
}

/// ΔB⊥ ≈ 1/(γt√(κδt)|α0 sin(Ωt)|) with Ω = γB.
pub fn rabi_error_propagation(b: f64, alpha0: f64, kappa_dt: f64, gamma: f64, t: f64) -> f64 {
    1.0 / (gamma * t * kappa_dt.sqrt() * (alpha0 * (gamma * b * t).sin()).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

/// Single-mode amplitude |α_j| ≈ (|α0|/2)(1 ± cos φ), with |α0|² the
/// superradiant steady state.
pub fn single_mode_model(phi: f64, params: &PhysicalParams, branch: Branch) -> f64 {
    let a0 = steady_state_photons(params).sqrt();
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    0.5 * a0 * (1.0 + sign * phi.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn lab() -> PhysicalParams {
        PhysicalParams::figure2()
    }

    #[test]
    fn ramsey_scales_with_times() {
        let p = lab();
        let a = sensitivity_ramsey(&p, 0.01, 0.01, 1.0).unwrap().bound;
        let b = sensitivity_ramsey(&p, 0.02, 0.01, 1.0).unwrap().bound;
        let c = sensitivity_ramsey(&p, 0.01, 0.04, 1.0).unwrap().bound;
        assert!((a / b - 2.0).abs() < 1e-12);
        assert!((a / c - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ramsey_reference_value() {
        let p = lab();
        let r = sensitivity_ramsey(&p, 0.01, 0.01, 1.0).unwrap();
        let gamma = 2.0 * PI * 7e9;
        let kappa = 300.0 * 2.0 * PI * 3770.0;
        let a0 = steady_state_photons(&p).sqrt();
        let expect = 1.0 / (gamma * 0.01 * (kappa * 0.01).sqrt() * a0);
        assert!((r.bound - expect).abs() / expect < 1e-12);
        assert!(r.bound > 1e-15 && r.bound < 1e-13);
        assert!((r.bound - (r.inputs.t_cycle / r.qfi).sqrt()).abs() / r.bound < 1e-12);
    }

    #[test]
    fn rabi_scales_with_times() {
        let p = lab();
        let a = sensitivity_rabi(&p, 0.01, 1e-5, 1.0).unwrap().bound;
        let b = sensitivity_rabi(&p, 0.01, 4e-5, 1.0).unwrap().bound;
        let c = sensitivity_rabi(&p, 0.02, 1e-5, 1.0).unwrap().bound;
        assert!((a / b - 2.0).abs() < 1e-12);
        assert!((a / c - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_times() {
        assert!(sensitivity_ramsey(&lab(), 0.0, 0.01, 1.0).is_err());
        assert!(sensitivity_rabi(&lab(), 0.01, -1.0, 1.0).is_err());
    }

    #[test]
    fn zero_derivative_is_distinct() {
        assert!(matches!(qfi_bound(0.0), Err(Error::Estimation(_))));
        let q = qfi_bound(-4.0).unwrap();
        assert_eq!(q.fisher, 16.0);
        assert_eq!(q.bound, 0.25);
    }

    #[test]
    fn ramsey_qfi_equals_error_propagation() {
        let m = AmplitudeModel::Ramsey { alpha0: 910.0, kappa_t: 1.1e4, gamma: 4.4e10, tau: 0.01 };
        for phi in [0.3, 1.0, 2.0, 2.9] {
            let b = phi * m.field_scale();
            let q = qfi_bound(m.derivative(b)).unwrap();
            let expect = 1.0 / (4.4e10 * 0.01 * 1.1e4f64.sqrt() * 910.0 * phi.sin().abs());
            assert!((q.bound - expect).abs() / expect < 1e-12);
            let ep = ramsey_error_propagation(b, 910.0, 1.1e4, 4.4e10, 0.01);
            assert!((q.bound - ep).abs() / expect < 1e-12);
        }
    }

    #[test]
    fn finite_difference_matches_derivative() {
        let m = AmplitudeModel::Ramsey { alpha0: 910.0, kappa_t: 1.1e4, gamma: 4.4e10, tau: 0.01 };
        for phi in [0.2, 1.0, 2.5] {
            let b = phi * m.field_scale();
            let fd = m.finite_difference(b);
            let an = m.derivative(b);
            assert!((fd - an).abs() / an.abs() < 1e-6, "{fd} vs {an}");
        }
    }

    #[test]
    fn single_mode_model_values() {
        let p = lab();
        let a0 = steady_state_photons(&p).sqrt();
        assert!((single_mode_model(0.0, &p, Branch::Plus) - a0).abs() < 1e-9);
        assert!(single_mode_model(0.0, &p, Branch::Minus).abs() < 1e-9);
        assert!((single_mode_model(PI / 2.0, &p, Branch::Plus) - a0 / 2.0).abs() < 1e-9);
    }

    #[test]
    fn single_mode_amplitudes() {
        let m = AmplitudeModel::SingleMode { alpha0: 10.0, kappa_t: 1.0, gamma: 1.0, tau: 1.0 };
        assert!((m.amplitude(0.0) - 10.0).abs() < 1e-12);
        assert!((m.amplitude(PI / 2.0) - 5.0).abs() < 1e-12);
    }
}
