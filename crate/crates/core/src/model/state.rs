use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::params::PhysicalParams;
use crate::error::{Error, Result};

/// Mean-field state: two condensate components on a shared grid and the two
/// cavity amplitudes. ∫|ψ_j|² dx counts atoms; |α_j|² counts photons.
#[derive(Debug, Clone)]
pub struct SystemState {
    pub grid: Arc<Grid>,
    pub psi1: Vec<Complex64>,
    pub psi2: Vec<Complex64>,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub time: f64,
}

/// Collective pseudo-spin ∫Ψ†σΨ dx in atom-number units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoSpin {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl PseudoSpin {
    pub fn length(&self) -> f64 {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }
}

impl SystemState {
    pub fn populations(&self) -> (f64, f64) {
        let g = &self.grid;
        (
            g.integrate(self.psi1.iter().map(|z| z.norm_sqr())),
            g.integrate(self.psi2.iter().map(|z| z.norm_sqr())),
        )
    }

    pub fn norm(&self) -> f64 {
        let (a, b) = self.populations();
        a + b
    }

    /// Population imbalance δN = N₁ − N₂.
    pub fn imbalance(&self) -> f64 {
        let (a, b) = self.populations();
        a - b
    }

    /// ∫ψ₁ψ₂* dx; its argument is the Bloch azimuth φ of |θ, φ⟩.
    pub fn coherence(&self) -> Complex64 {
        let s: Complex64 = self
            .psi1
            .iter()
            .zip(&self.psi2)
            .map(|(a, b)| a * b.conj())
            .sum();
        s * self.grid.spacing
    }

    pub fn relative_phase(&self) -> f64 {
        self.coherence().arg()
    }

    pub fn photon_numbers(&self) -> (f64, f64) {
        (self.alpha1.norm_sqr(), self.alpha2.norm_sqr())
    }

    pub fn is_finite(&self) -> bool {
        self.alpha1.is_finite()
            && self.alpha2.is_finite()
            && self.psi1.iter().chain(&self.psi2).all(|z| z.is_finite())
    }

    /// Builds |θ, φ⟩ ∝ (e^{iφ}cos(θ/2), sin(θ/2)) on a common spatial profile.
    /// `density` is rescaled to hold `n_atoms` atoms in total.
    pub fn from_profile(
        grid: Arc<Grid>,
        density: &[f64],
        n_atoms: f64,
        theta: f64,
        phi: f64,
    ) -> Result<Self> {
        if density.len() != grid.n_points {
            return Err(Error::invalid("density profile does not match the grid"));
        }
        if density.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::invalid("density profile must be finite and non-negative"));
        }
        let total = grid.integrate(density.iter().copied());
        if !(total > 0.0) {
            return Err(Error::invalid("density profile is empty"));
        }
        let scale = n_atoms / total;
        let a1 = Complex64::from_polar((theta / 2.0).cos(), phi);
        let a2 = Complex64::new((theta / 2.0).sin(), 0.0);
        let amp: Vec<f64> = density.iter().map(|d| (d * scale).sqrt()).collect();
        Ok(Self {
            psi1: amp.iter().map(|&a| a1 * a).collect(),
            psi2: amp.iter().map(|&a| a2 * a).collect(),
            grid,
            alpha1: Complex64::new(0.0, 0.0),
            alpha2: Complex64::new(0.0, 0.0),
            time: 0.0,
        })
    }

    /// Spatial density of component `j` (0 or 1).
    pub fn density(&self, j: usize) -> Vec<f64> {
        let psi = if j == 0 { &self.psi1 } else { &self.psi2 };
        psi.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Total density |ψ₁|² + |ψ₂|².
    pub fn total_density(&self) -> Vec<f64> {
        self.psi1
            .iter()
            .zip(&self.psi2)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect()
    }
}

/// Seeded density profile (1 + s·cos k_c x), the common starting point.
fn seeded_profile(grid: &Grid, seed_amplitude: f64) -> Vec<f64> {
    grid.cos_kx
        .iter()
        .map(|c| 1.0 + seed_amplitude * c)
        .collect()
}

fn check_seed(seed_amplitude: f64) -> Result<()> {
    if !(seed_amplitude.is_finite() && seed_amplitude.abs() < 1.0) {
        return Err(Error::invalid(format!(
            "seed amplitude must satisfy |s| < 1 (got {seed_amplitude})"
        )));
    }
    Ok(())
}

/// Equal superposition |π/2, 0⟩ with uniform density and an optional
/// cos(k_c x) modulation. The sign of the seed selects the ℤ₂ branch.
pub fn initial_state(
    params: &PhysicalParams,
    grid: Arc<Grid>,
    seed_amplitude: f64,
) -> Result<SystemState> {
    spin_coherent_state(params, grid, seed_amplitude, std::f64::consts::FRAC_PI_2, 0.0)
}

/// Same seeded density as [`initial_state`] but with arbitrary Bloch angles;
/// θ = 0 puts every atom in component 1.
pub fn spin_coherent_state(
    params: &PhysicalParams,
    grid: Arc<Grid>,
    seed_amplitude: f64,
    theta: f64,
    phi: f64,
) -> Result<SystemState> {
    check_seed(seed_amplitude)?;
    let profile = seeded_profile(&grid, seed_amplitude);
    SystemState::from_profile(grid, &profile, params.n_atoms, theta, phi)
}

pub fn pseudo_spin(state: &SystemState) -> PseudoSpin {
    let c = state.coherence();
    let (n1, n2) = state.populations();
    // ψ†σ_xψ = 2 Re(ψ₁*ψ₂), ψ†σ_yψ = 2 Im(ψ₁*ψ₂); coherence() holds ψ₁ψ₂*.
    PseudoSpin {
        sx: 2.0 * c.re,
        sy: -2.0 * c.im,
        sz: n1 - n2,
    }
}
