use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cavity::{cavity_fixed_point, overlaps};
use super::config::LightShift;
use crate::error::{Error, Result};
use crate::model::{PhysicalParams, Spectral, SystemState};

/// Settings for the imaginary-time preparation of the self-ordered state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxConfig {
    pub dtau: f64,
    pub max_iter: usize,
    /// Stop once the photon number changes by less than this (relative) per
    /// iteration.
    pub tol: f64,
    #[serde(default)]
    pub light_shift: LightShift,
    #[serde(default = "yes")]
    pub dispersive_shift: bool,
}

fn yes() -> bool {
    true
}

impl Default for RelaxConfig {
    fn default() -> Self {
        Self {
            dtau: 2e-5,
            max_iter: 50_000,
            tol: 1e-11,
            light_shift: LightShift::Differential,
            dispersive_shift: true,
        }
    }
}

impl RelaxConfig {
    pub fn with_light_shift(mut self, ls: LightShift) -> Self {
        self.light_shift = ls;
        self
    }

    pub fn with_dispersive_shift(mut self, on: bool) -> Self {
        self.dispersive_shift = on;
        self
    }
}

/// Relaxes the spatial profile of `seed` into the self-ordered lattice.
///
/// Imaginary-time split-step with the cavity slaved to its stationary value
/// for the current overlaps. Each component keeps its atom number and its
/// overall complex phase, so the spin direction of `seed` is preserved. The
/// returned state carries the stationary cavity amplitudes and time 0.
pub fn relax_ordered(
    seed: &SystemState,
    params: &PhysicalParams,
    cfg: &RelaxConfig,
) -> Result<SystemState> {
    params.validate()?;
    if !(cfg.dtau > 0.0 && cfg.dtau.is_finite()) || cfg.max_iter == 0 {
        return Err(Error::invalid("relaxation needs dtau > 0 and max_iter >= 1"));
    }
    let mut cavity = *params;
    if !cfg.dispersive_shift {
        cavity.u0 = 0.0;
    }
    let g = seed.grid.clone();
    let spectral = Spectral::new(g.n_points);
    let half_kin: Vec<f64> = g
        .wavenumbers
        .iter()
        .map(|k| (-k * k * cfg.dtau / 2.0).exp())
        .collect();
    let (n1, n2) = seed.populations();
    let targets = [n1, n2];

    let mut s = seed.clone();
    let mut last = f64::NAN;
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let ov = overlaps(&s);
        let a = [
            cavity_fixed_point(ov.mode(0), &cavity),
            cavity_fixed_point(ov.mode(1), &cavity),
        ];
        let photons = a[0].norm_sqr() + a[1].norm_sqr();
        if (photons - last).abs() <= cfg.tol * photons.max(1.0) {
            converged = true;
            break;
        }
        last = photons;

        let coeff = |z: Complex64| (params.u0 * z.norm_sqr(), 2.0 * params.eta0 * z.re);
        let (k1, k2) = (coeff(a[0]), coeff(a[1]));
        let pot = |c: f64, cc: f64| {
            let v1 = k1.0 * cc + k1.1 * c;
            let v2 = k2.0 * cc + k2.1 * c;
            match cfg.light_shift {
                LightShift::Differential => (v1, v2),
                LightShift::Compensated => (0.5 * (v1 + v2), 0.5 * (v1 + v2)),
            }
        };
        let vmin = g
            .cos_kx
            .iter()
            .zip(&g.cos2_kx)
            .map(|(&c, &cc)| {
                let (v1, v2) = pot(c, cc);
                v1.min(v2)
            })
            .fold(f64::INFINITY, f64::min);

        for psi in [&mut s.psi1, &mut s.psi2] {
            kinetic(&spectral, psi, &half_kin);
        }
        for i in 0..g.n_points {
            let (v1, v2) = pot(g.cos_kx[i], g.cos2_kx[i]);
            s.psi1[i] *= (-(v1 - vmin) * cfg.dtau).exp();
            s.psi2[i] *= (-(v2 - vmin) * cfg.dtau).exp();
        }
        for psi in [&mut s.psi1, &mut s.psi2] {
            kinetic(&spectral, psi, &half_kin);
        }
        for (j, psi) in [&mut s.psi1, &mut s.psi2].into_iter().enumerate() {
            let n = g.integrate(psi.iter().map(|z| z.norm_sqr()));
            if targets[j] > 0.0 && n > 0.0 {
                let f = (targets[j] / n).sqrt();
                psi.iter_mut().for_each(|z| *z *= f);
            }
        }
        if !s.is_finite() {
            return Err(Error::NonFinite { time: 0.0 });
        }
    }
    if !converged {
        log::warn!("imaginary-time relaxation stopped at max_iter without converging");
    }
    let ov = overlaps(&s);
    s.alpha1 = cavity_fixed_point(ov.mode(0), &cavity);
    s.alpha2 = cavity_fixed_point(ov.mode(1), &cavity);
    s.time = 0.0;
    Ok(s)
}

fn kinetic(spectral: &Spectral, psi: &mut [Complex64], factor: &[f64]) {
    spectral.forward(psi);
    for (z, f) in psi.iter_mut().zip(factor) {
        *z *= f;
    }
    spectral.inverse(psi);
}
