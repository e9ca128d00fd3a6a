use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::steady::analytic_response;
use crate::error::{Error, Result};
use crate::model::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Adiabatic,
    Resonant,
    Fast,
}

/// Below this multiple of |Δc| the photons follow the atoms adiabatically.
pub const ADIABATIC_LIMIT: f64 = 0.5;
/// Above this multiple of |Δc| the photons lag by half a period.
pub const FAST_LIMIT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub omega: f64,
    pub regime: Regime,
    /// Nominal lag of the regime: 0, π/2 or π.
    pub predicted_lag: f64,
    /// Lag of the closed-form steady-state δn(t).
    pub analytic_lag: f64,
    /// Envelope of the closed-form δn(t) [photons].
    pub amplitude_model: f64,
}

pub fn classify_regime(omega: f64, params: &PhysicalParams) -> Result<RegimeReport> {
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::invalid(format!("omega must be finite and >= 0 (got {omega})")));
    }
    let dc = params.delta_c.abs();
    let (regime, predicted_lag) = if omega < ADIABATIC_LIMIT * dc {
        (Regime::Adiabatic, 0.0)
    } else if omega <= FAST_LIMIT * dc {
        (Regime::Resonant, FRAC_PI_2)
    } else {
        (Regime::Fast, PI)
    };
    let (amplitude_model, analytic_lag) = analytic_response(omega, params);
    Ok(RegimeReport {
        omega,
        regime,
        predicted_lag,
        analytic_lag,
        amplitude_model,
    })
}

/// Minimum record length, in oscillation periods, for lag extraction.
pub const MIN_LAG_PERIODS: f64 = 3.0;

/// Complex amplitude of `x` at angular frequency `omega` over the longest
/// prefix of whole periods: x ≈ mean + Re(Z e^{iωt}), returns Z.
pub fn demodulate(t: &[f64], x: &[f64], omega: f64) -> Result<Complex64> {
    if t.len() != x.len() || t.len() < 8 {
        return Err(Error::Estimation(
            "demodulation needs matching series with at least 8 samples".into(),
        ));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Estimation(format!("cannot demodulate at omega = {omega}")));
    }
    let period = 2.0 * PI / omega;
    let span = t[t.len() - 1] - t[0];
    let whole = (span / period).floor();
    if whole < 1.0 {
        return Err(Error::Estimation("record shorter than one period".into()));
    }
    let dt = span / (t.len() - 1) as f64;
    // Samples covering [t0, t0 + whole·T) on a uniform grid.
    let n = ((whole * period / dt).round() as usize).min(t.len());
    let mean = x[..n].iter().sum::<f64>() / n as f64;
    let z: Complex64 = t[..n]
        .iter()
        .zip(&x[..n])
        .map(|(&ti, &xi)| (xi - mean) * Complex64::from_polar(1.0, -omega * (ti - t[0])))
        .sum();
    Ok(2.0 * z / n as f64)
}

/// Lag of `b` behind `a` at frequency `omega`, folded into [0, π].
///
/// Both channels are projected onto e^{iωt} over whole periods (a lock-in
/// band-pass), and the lag is the phase of the cross-spectrum at ω.
pub fn phase_lag(t: &[f64], a: &[f64], b: &[f64], omega: f64) -> Result<f64> {
    if t.len() < 2 {
        return Err(Error::Estimation("record too short".into()));
    }
    let span = t[t.len() - 1] - t[0];
    if span * omega < MIN_LAG_PERIODS * 2.0 * PI {
        return Err(Error::Estimation(format!(
            "record spans {:.2} periods, need at least {MIN_LAG_PERIODS}",
            span * omega / (2.0 * PI)
        )));
    }
    let za = demodulate(t, a, omega)?;
    let zb = demodulate(t, b, omega)?;
    for (name, x, z) in [("first", a, za), ("second", b, zb)] {
        if !has_power(x, z) {
            return Err(Error::Estimation(format!(
                "{name} channel has no oscillatory power at omega"
            )));
        }
    }
    let lag = (za * zb.conj()).arg();
    Ok(lag.abs())
}

/// Oscillation amplitude of `x` at `omega`.
pub fn oscillation_amplitude(t: &[f64], x: &[f64], omega: f64) -> Result<f64> {
    Ok(demodulate(t, x, omega)?.norm())
}

fn has_power(x: &[f64], z: Complex64) -> bool {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let rms = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    rms > 0.0 && z.norm() > 0.1 * rms * std::f64::consts::SQRT_2
}
