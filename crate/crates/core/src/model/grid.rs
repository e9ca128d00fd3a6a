use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Minimum sampling density; cos²(k_c x) carries harmonics up to 2 k_c.
pub const MIN_POINTS_PER_PERIOD: usize = 8;

/// Periodic 1D grid along the cavity axis. Positions are in units of 1/k_c,
/// so one lattice period λ_c spans 2π.
#[derive(Clone, PartialEq)]
pub struct Grid {
    pub n_points: usize,
    pub periods: usize,
    pub length: f64,
    pub spacing: f64,
    pub positions: Vec<f64>,
    /// Angular wavenumbers in FFT order.
    pub wavenumbers: Vec<f64>,
    pub(crate) cos_kx: Vec<f64>,
    pub(crate) cos2_kx: Vec<f64>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n_points", &self.n_points)
            .field("periods", &self.periods)
            .field("spacing", &self.spacing)
            .finish()
    }
}

pub fn make_grid(periods: usize, n_points: usize) -> Result<Grid> {
    if periods < 1 {
        return Err(Error::invalid("grid needs at least one lattice period"));
    }
    if !n_points.is_power_of_two() {
        return Err(Error::invalid(format!(
            "n_points must be a power of two (got {n_points})"
        )));
    }
    if n_points < MIN_POINTS_PER_PERIOD * periods {
        return Err(Error::invalid(format!(
            "{n_points} points over {periods} periods is below {MIN_POINTS_PER_PERIOD} points per wavelength"
        )));
    }
    let length = 2.0 * PI * periods as f64;
    let spacing = length / n_points as f64;
    let positions: Vec<f64> = (0..n_points).map(|i| i as f64 * spacing).collect();
    let dk = 2.0 * PI / length;
    let wavenumbers = (0..n_points)
        .map(|i| {
            let m = if i < n_points / 2 {
                i as f64
            } else {
                i as f64 - n_points as f64
            };
            m * dk
        })
        .collect();
    let cos_kx: Vec<f64> = positions.iter().map(|x| x.cos()).collect();
    let cos2_kx = cos_kx.iter().map(|c| c * c).collect();
    Ok(Grid {
        n_points,
        periods,
        length,
        spacing,
        positions,
        wavenumbers,
        cos_kx,
        cos2_kx,
    })
}

impl Grid {
    pub fn cos_kx(&self) -> &[f64] {
        &self.cos_kx
    }

    pub fn cos2_kx(&self) -> &[f64] {
        &self.cos2_kx
    }

    /// Rectangle-rule quadrature, spectrally accurate on a periodic grid.
    pub fn integrate(&self, f: impl IntoIterator<Item = f64>) -> f64 {
        f.into_iter().sum::<f64>() * self.spacing
    }

    /// Largest representable kinetic energy k_max² (recoil units).
    pub fn max_kinetic(&self) -> f64 {
        let kmax = PI / self.spacing;
        kmax * kmax
    }
}

/// Forward/inverse FFT pair for a fixed grid size. The inverse is normalized
/// so that `inverse(forward(f)) == f`.
#[derive(Clone)]
pub struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl Spectral {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            scale: 1.0 / n as f64,
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        for v in data.iter_mut() {
            *v *= self.scale;
        }
    }
}
