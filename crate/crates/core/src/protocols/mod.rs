//! Magnetometry experiments on top of the simulator: the Ramsey scheme for
//! a static field B∥, the Rabi scheme for an oscillating field B⊥, photon
//! record synthesis with optional Poissonian counting noise, and the field
//! estimators that invert the records.
//!
//! Times and fields at this level are in SI units (seconds, tesla); the
//! conversion to recoil units happens inside the runs.

mod estimate;
mod rabi;
mod ramsey;
mod record;
mod response;

pub use estimate::{
    estimate_b_parallel, estimate_b_parallel_with, estimate_b_perp, estimate_frequency,
    FieldEstimate, SineFit, MIN_MODULATION, PEAK_TO_MEDIAN, SIN_PHI_FLOOR,
};
pub use rabi::{run_rabi, RabiConfig, MAX_WINDOW_PHASE};
pub use ramsey::{
    calibrate_alpha0, run_ramsey, Interrogation, RamseyConfig, RamseyReadout,
};
pub use record::{PhotonRecord, SUPERRADIANT_FLOOR};
pub use response::{driven_response, DrivenResponse, TRANSIENT_KAPPA_TIMES};
