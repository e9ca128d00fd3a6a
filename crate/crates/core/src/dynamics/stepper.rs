use std::sync::Arc;

use num_complex::Complex64;

use super::cavity::{cavity_exact_step, cavity_rhs, overlaps, Overlaps};
use super::config::{LightShift, Scheme, StepConfig, NORM_DRIFT_TOLERANCE};
use crate::error::{Error, Result};
use crate::model::{Grid, PhysicalParams, Spectral, SystemState};

/// Source of additive cavity noise, one increment per mode per step.
pub trait CavityKick {
    fn kick(&mut self, dt: f64) -> [Complex64; 2];
}

/// Integrator for the coupled condensate + cavity equations on a fixed grid.
///
/// Atomic Hamiltonian per point, with V_j = U0|α_j|²cos² + 2η0 Re(α_j) cos:
///
/// ```text
/// | k² + V₁ − (γB∥ + ω)     iΩ/2        |
/// |     −iΩ/2            k² + V₂ + δ    |
/// ```
///
/// Cavity: i dα_j/dt = [−Δc + U0⟨cos²⟩_j − iκ]α_j + η0⟨cos⟩_j.
#[derive(Clone)]
pub struct Stepper {
    params: PhysicalParams,
    /// Copy of `params` used in the cavity equation (U0 zeroed when the
    /// dispersive shift is off).
    cavity_params: PhysicalParams,
    cfg: StepConfig,
    grid: Arc<Grid>,
    spectral: Spectral,
    half_kinetic: Vec<Complex64>,
    zeeman: [f64; 2],
    rabi: f64,
}

impl Stepper {
    pub fn new(grid: Arc<Grid>, params: &PhysicalParams, cfg: &StepConfig) -> Result<Self> {
        params.validate()?;
        cfg.validate(params)?;
        let half_kinetic = grid
            .wavenumbers
            .iter()
            .map(|k| Complex64::from_polar(1.0, -k * k * cfg.dt / 2.0))
            .collect();
        let mut cavity_params = *params;
        if !cfg.dispersive_shift {
            cavity_params.u0 = 0.0;
        }
        Ok(Self {
            params: *params,
            cavity_params,
            cfg: *cfg,
            spectral: Spectral::new(grid.n_points),
            grid,
            half_kinetic,
            zeeman: [-(params.larmor_rate() + params.omega_ac), params.delta],
            rabi: params.rabi_frequency(),
        })
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn config(&self) -> &StepConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.cfg.dt
    }

    /// Parameters as seen by the cavity equation.
    pub fn cavity_params(&self) -> &PhysicalParams {
        &self.cavity_params
    }

    pub fn step(&mut self, state: &mut SystemState) -> Result<()> {
        self.step_with(state, None)
    }

    /// One step; `kick` adds stochastic increments to the cavity amplitudes.
    pub fn step_with(
        &mut self,
        state: &mut SystemState,
        kick: Option<&mut dyn CavityKick>,
    ) -> Result<()> {
        if state.psi1.len() != self.grid.n_points || state.psi2.len() != self.grid.n_points {
            return Err(Error::invalid("state does not live on the stepper grid"));
        }
        let before = state.norm();
        match self.cfg.scheme {
            Scheme::StrangSplit => self.strang(state, kick),
            Scheme::Rk4Monolithic => self.rk4(state, kick),
        }
        state.time += self.cfg.dt;
        let after = state.norm();
        if !(after.is_finite() && state.alpha1.is_finite() && state.alpha2.is_finite()) {
            return Err(Error::NonFinite { time: state.time });
        }
        if before > 0.0 {
            let drift = (after - before).abs() / before;
            if drift > NORM_DRIFT_TOLERANCE {
                return Err(Error::NormDrift { drift, time: state.time });
            }
        }
        Ok(())
    }

    fn strang(&mut self, state: &mut SystemState, kick: Option<&mut dyn CavityKick>) {
        let dt = self.cfg.dt;
        self.kinetic(&mut state.psi1);
        self.kinetic(&mut state.psi2);

        self.cavity_half(state, &overlaps(state), dt / 2.0);
        self.potential(state, dt);
        self.cavity_half(state, &overlaps(state), dt / 2.0);
        if let Some(k) = kick {
            let [d1, d2] = k.kick(dt);
            state.alpha1 += d1;
            state.alpha2 += d2;
        }

        self.kinetic(&mut state.psi1);
        self.kinetic(&mut state.psi2);
    }

    fn kinetic(&self, psi: &mut [Complex64]) {
        self.spectral.forward(psi);
        for (z, k) in psi.iter_mut().zip(&self.half_kinetic) {
            *z *= k;
        }
        self.spectral.inverse(psi);
    }

    fn cavity_half(&self, state: &mut SystemState, ov: &Overlaps, dt: f64) {
        state.alpha1 = cavity_exact_step(state.alpha1, ov.mode(0), &self.cavity_params, dt);
        state.alpha2 = cavity_exact_step(state.alpha2, ov.mode(1), &self.cavity_params, dt);
    }

    /// Diagonal potential coefficients (U0|α|², 2η0 Re α) for both modes.
    fn potential_coeffs(&self, a1: Complex64, a2: Complex64) -> [(f64, f64); 2] {
        let p = &self.params;
        [
            (p.u0 * a1.norm_sqr(), 2.0 * p.eta0 * a1.re),
            (p.u0 * a2.norm_sqr(), 2.0 * p.eta0 * a2.re),
        ]
    }

    #[inline]
    fn local_potentials(&self, coeffs: &[(f64, f64); 2], c: f64, cc: f64) -> (f64, f64) {
        let v1 = coeffs[0].0 * cc + coeffs[0].1 * c;
        let v2 = coeffs[1].0 * cc + coeffs[1].1 * c;
        match self.cfg.light_shift {
            LightShift::Differential => (v1, v2),
            LightShift::Compensated => {
                let v = 0.5 * (v1 + v2);
                (v, v)
            }
        }
    }

    /// Exact pointwise exponential of the 2×2 local Hamiltonian.
    fn potential(&self, state: &mut SystemState, dt: f64) {
        let coeffs = self.potential_coeffs(state.alpha1, state.alpha2);
        let half_rabi = 0.5 * self.rabi;
        let g = &self.grid;
        for i in 0..g.n_points {
            let (v1, v2) = self.local_potentials(&coeffs, g.cos_kx[i], g.cos2_kx[i]);
            let a = v1 + self.zeeman[0];
            let b = v2 + self.zeeman[1];
            let mean = 0.5 * (a + b);
            let h = 0.5 * (a - b);
            let r = (h * h + half_rabi * half_rabi).sqrt();
            let (cs, sn) = if r > 0.0 {
                ((r * dt).cos(), (r * dt).sin() / r)
            } else {
                (1.0, dt)
            };
            let phase = Complex64::from_polar(1.0, -mean * dt);
            let p1 = state.psi1[i];
            let p2 = state.psi2[i];
            let d1 = Complex64::new(cs, -h * sn);
            let d2 = Complex64::new(cs, h * sn);
            let off = sn * half_rabi;
            state.psi1[i] = phase * (d1 * p1 + off * p2);
            state.psi2[i] = phase * (d2 * p2 - off * p1);
        }
    }

    fn rk4(&mut self, state: &mut SystemState, kick: Option<&mut dyn CavityKick>) {
        let dt = self.cfg.dt;
        let y0 = Rk4Vec::from_state(state);
        let k1 = self.derivative(&y0);
        let k2 = self.derivative(&y0.axpy(dt / 2.0, &k1));
        let k3 = self.derivative(&y0.axpy(dt / 2.0, &k2));
        let k4 = self.derivative(&y0.axpy(dt, &k3));
        let mut y = y0;
        y.add_scaled(dt / 6.0, &k1);
        y.add_scaled(dt / 3.0, &k2);
        y.add_scaled(dt / 3.0, &k3);
        y.add_scaled(dt / 6.0, &k4);
        state.psi1 = y.psi1;
        state.psi2 = y.psi2;
        state.alpha1 = y.alpha[0];
        state.alpha2 = y.alpha[1];
        if let Some(k) = kick {
            let [d1, d2] = k.kick(dt);
            state.alpha1 += d1;
            state.alpha2 += d2;
        }
    }

    fn laplacian_term(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut buf = psi.to_vec();
        self.spectral.forward(&mut buf);
        for (z, k) in buf.iter_mut().zip(&self.grid.wavenumbers) {
            *z *= k * k;
        }
        self.spectral.inverse(&mut buf);
        buf
    }

    fn derivative(&self, y: &Rk4Vec) -> Rk4Vec {
        let g = &self.grid;
        let mut k1 = self.laplacian_term(&y.psi1);
        let mut k2 = self.laplacian_term(&y.psi2);
        let coeffs = self.potential_coeffs(y.alpha[0], y.alpha[1]);
        let half_rabi = 0.5 * self.rabi;
        let minus_i = -Complex64::i();
        let (mut c1, mut c2) = ([0.0; 2], [0.0; 2]);
        for i in 0..g.n_points {
            let (c, cc) = (g.cos_kx[i], g.cos2_kx[i]);
            let (v1, v2) = self.local_potentials(&coeffs, c, cc);
            let (p1, p2) = (y.psi1[i], y.psi2[i]);
            let h1 = k1[i] + (v1 + self.zeeman[0]) * p1 + Complex64::i() * half_rabi * p2;
            let h2 = k2[i] + (v2 + self.zeeman[1]) * p2 - Complex64::i() * half_rabi * p1;
            k1[i] = minus_i * h1;
            k2[i] = minus_i * h2;
            let (d1, d2) = (p1.norm_sqr(), p2.norm_sqr());
            c1[0] += d1 * c;
            c1[1] += d2 * c;
            c2[0] += d1 * cc;
            c2[1] += d2 * cc;
        }
        let ov = Overlaps {
            c1: c1.map(|v| v * g.spacing),
            c2: c2.map(|v| v * g.spacing),
        };
        Rk4Vec {
            psi1: k1,
            psi2: k2,
            alpha: [
                cavity_rhs(y.alpha[0], ov.mode(0), &self.cavity_params),
                cavity_rhs(y.alpha[1], ov.mode(1), &self.cavity_params),
            ],
        }
    }
}

struct Rk4Vec {
    psi1: Vec<Complex64>,
    psi2: Vec<Complex64>,
    alpha: [Complex64; 2],
}

impl Rk4Vec {
    fn from_state(s: &SystemState) -> Self {
        Self {
            psi1: s.psi1.clone(),
            psi2: s.psi2.clone(),
            alpha: [s.alpha1, s.alpha2],
        }
    }

    fn axpy(&self, h: f64, k: &Rk4Vec) -> Rk4Vec {
        Rk4Vec {
            psi1: self.psi1.iter().zip(&k.psi1).map(|(a, b)| a + h * b).collect(),
            psi2: self.psi2.iter().zip(&k.psi2).map(|(a, b)| a + h * b).collect(),
            alpha: [self.alpha[0] + h * k.alpha[0], self.alpha[1] + h * k.alpha[1]],
        }
    }

    fn add_scaled(&mut self, h: f64, k: &Rk4Vec) {
        for (a, b) in self.psi1.iter_mut().zip(&k.psi1) {
            *a += h * b;
        }
        for (a, b) in self.psi2.iter_mut().zip(&k.psi2) {
            *a += h * b;
        }
        self.alpha[0] += h * k.alpha[0];
        self.alpha[1] += h * k.alpha[1];
    }
}

/// Advances `state` by one step of `cfg.dt`. Builds a fresh [`Stepper`];
/// use the stepper directly when taking many steps.
pub fn step(state: &SystemState, params: &PhysicalParams, cfg: &StepConfig) -> Result<SystemState> {
    let mut stepper = Stepper::new(state.grid.clone(), params, cfg)?;
    let mut next = state.clone();
    stepper.step(&mut next)?;
    Ok(next)
}
