//! Adiabatic elimination of the excited states: maps the cavity coupling
//! G_j, pump Rabi frequency Ω_j and atomic detuning Δ_j of each Raman
//! channel onto the model constants U_j = G_j²/Δ_j, η_j = G_jΩ_j/Δ_j and
//! the two-photon detuning δ = Ω₂²/Δ₂ − Ω₁²/Δ₁ + ω_{g₂}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Couplings of one ground-to-excited channel, all in the same rate unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamanChannel {
    pub g: f64,
    pub omega_pump: f64,
    pub delta_atom: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConstants {
    pub u: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub channels: [ChannelConstants; 2],
    pub delta: f64,
}

pub fn derive_channel(ch: &RamanChannel) -> Result<ChannelConstants> {
    if !(ch.g.is_finite() && ch.omega_pump.is_finite() && ch.delta_atom.is_finite()) {
        return Err(Error::invalid("channel couplings must be finite"));
    }
    if ch.delta_atom == 0.0 {
        return Err(Error::invalid(
            "atomic detuning is zero: excited state cannot be eliminated",
        ));
    }
    Ok(ChannelConstants {
        u: ch.g * ch.g / ch.delta_atom,
        eta: ch.g * ch.omega_pump / ch.delta_atom,
    })
}

pub fn derive_effective_params(
    ch1: &RamanChannel,
    ch2: &RamanChannel,
    omega_g2: f64,
) -> Result<EffectiveParams> {
    let c1 = derive_channel(ch1)?;
    let c2 = derive_channel(ch2)?;
    let delta = ch2.omega_pump.powi(2) / ch2.delta_atom - ch1.omega_pump.powi(2) / ch1.delta_atom
        + omega_g2;
    Ok(EffectiveParams {
        channels: [c1, c2],
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_channel_arithmetic() {
        let c = derive_channel(&RamanChannel { g: 10.0, omega_pump: 20.0, delta_atom: 6000.0 }).unwrap();
        assert!((c.u - 1.0 / 60.0).abs() < 1e-15);
        assert!((c.eta - 1.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn balanced_channels_leave_bare_splitting() {
        let a = RamanChannel { g: 3.0, omega_pump: 40.0, delta_atom: -800.0 };
        let b = RamanChannel { g: 5.0, omega_pump: 20.0, delta_atom: -200.0 };
        let e = derive_effective_params(&a, &b, 12.5).unwrap();
        assert!((e.delta - 12.5).abs() < 1e-12);
    }

    #[test]
    fn zero_detuning_rejected() {
        let a = RamanChannel { g: 1.0, omega_pump: 1.0, delta_atom: 0.0 };
        assert!(derive_channel(&a).is_err());
        assert!(derive_effective_params(&a, &a, 0.0).is_err());
    }
}
