use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::analytics::steady_state_photons;
use crate::dynamics::{relax_ordered, LightShift, RelaxConfig};
use crate::error::{Error, Result};
use crate::model::{spin_coherent_state, Grid, PhysicalParams, SystemState};

/// Detected photon-number difference δn = n₁ − n₂ per collection window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonRecord {
    /// (t [s], δn [counts]); t marks the window centre.
    pub samples: Vec<(f64, f64)>,
    /// Per-window counts (n₁, n₂) behind each δn.
    pub mode_counts: Vec<[f64; 2]>,
    pub shot_noise_applied: bool,
}

impl PhotonRecord {
    pub fn new(
        samples: Vec<(f64, f64)>,
        mode_counts: Vec<[f64; 2]>,
        shot_noise_applied: bool,
    ) -> Result<Self> {
        if samples.len() != mode_counts.len() {
            return Err(Error::invalid("record samples and mode counts differ in length"));
        }
        if samples.iter().any(|(t, v)| !(t.is_finite() && v.is_finite())) {
            return Err(Error::invalid("record contains non-finite entries"));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid("record timestamps must be strictly increasing"));
        }
        Ok(Self {
            samples,
            mode_counts,
            shot_noise_applied,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }
}

/// Below this fraction of the superradiant photon number the cavity is
/// considered dark.
pub const SUPERRADIANT_FLOOR: f64 = 1e-2;

/// Seed modulation for preparing the ordered state (positive branch).
pub(crate) const PREP_SEED: f64 = 0.3;

/// Cavity settling time in units of 1/κ.
pub(crate) const SETTLE_KAPPA_TIMES: f64 = 20.0;

pub(crate) fn require_pump(params: &PhysicalParams) -> Result<f64> {
    let n_ss = steady_state_photons(params);
    if !(n_ss > 0.0) {
        return Err(Error::NotSuperradiant {
            photons: 0.0,
            floor: 0.0,
        });
    }
    Ok(n_ss)
}

pub(crate) fn check_superradiant(photons: f64, n_ss: f64) -> Result<()> {
    let floor = SUPERRADIANT_FLOOR * n_ss;
    if !(photons >= floor) {
        return Err(Error::NotSuperradiant { photons, floor });
    }
    Ok(())
}

/// Self-ordered state with Bloch angles (θ, φ) and the cavity at its
/// stationary value; fails if the relaxed lattice does not scatter light.
pub(crate) fn prepare_ordered(
    params: &PhysicalParams,
    grid: Arc<Grid>,
    theta: f64,
    phi: f64,
) -> Result<SystemState> {
    let n_ss = require_pump(params)?;
    let seed = spin_coherent_state(params, grid, PREP_SEED, theta, phi)?;
    let relax = RelaxConfig::default().with_light_shift(LightShift::Compensated);
    let state = relax_ordered(&seed, params, &relax)?;
    let (a, b) = state.photon_numbers();
    check_superradiant(a + b, n_ss)?;
    Ok(state)
}

/// Poissonian draw around `mean`; a zero mean gives zero counts.
pub(crate) fn poisson_counts<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<f64> {
    if mean == 0.0 {
        return Ok(0.0);
    }
    let dist = Poisson::new(mean)
        .map_err(|e| Error::invalid(format!("cannot draw counts with mean {mean}: {e}")))?;
    Ok(dist.sample(rng))
}
