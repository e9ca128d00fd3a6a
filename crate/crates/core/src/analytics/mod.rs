//! Closed-form oracles and metrology analysis: stationary cavity fields,
//! photon-response regimes, lag extraction, sensitivity bounds, Fisher
//! information and power-law fits.

mod regime;
mod scaling;
mod sensitivity;
mod steady;

pub use regime::{
    classify_regime, demodulate, oscillation_amplitude, phase_lag, Regime, RegimeReport,
    ADIABATIC_LIMIT, FAST_LIMIT, MIN_LAG_PERIODS,
};
pub use scaling::{scaling_fit, ScalingFit, MIN_SCALING_DECADES, MIN_SCALING_POINTS};
pub use sensitivity::{
    qfi_bound, rabi_error_propagation, ramsey_error_propagation, sensitivity_rabi,
    sensitivity_ramsey, sensitivity_ramsey_with, sensitivity_single_mode, single_mode_model,
    AmplitudeModel, Branch, QfiBound, SensitivityInputs, SensitivityReport, SensitivityScheme,
};
pub use steady::{
    analytic_cavity_fields, analytic_delta_n, analytic_delta_n_printed, analytic_response,
    steady_state_photons,
};
