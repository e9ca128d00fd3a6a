use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::{PhysicalParams, SystemState};

/// Spatial overlaps of the two atomic densities with the cavity mode function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overlaps {
    /// ⟨cos(k_c x)⟩_j for j = 1, 2.
    pub c1: [f64; 2],
    /// ⟨cos²(k_c x)⟩_j for j = 1, 2.
    pub c2: [f64; 2],
}

/// Overlap pair for one mode: (⟨cos⟩_j, ⟨cos²⟩_j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeOverlap {
    pub cos: f64,
    pub cos2: f64,
}

impl Overlaps {
    pub fn mode(&self, j: usize) -> ModeOverlap {
        ModeOverlap {
            cos: self.c1[j],
            cos2: self.c2[j],
        }
    }
}

pub fn overlaps(state: &SystemState) -> Overlaps {
    let g = &state.grid;
    let mut c1 = [0.0; 2];
    let mut c2 = [0.0; 2];
    for (j, psi) in [&state.psi1, &state.psi2].into_iter().enumerate() {
        let (mut a, mut b) = (0.0, 0.0);
        for ((z, c), cc) in psi.iter().zip(&g.cos_kx).zip(&g.cos2_kx) {
            let d = z.norm_sqr();
            a += d * c;
            b += d * cc;
        }
        c1[j] = a * g.spacing;
        c2[j] = b * g.spacing;
    }
    Overlaps { c1, c2 }
}

/// dα/dt = −i{[−Δc + U0⟨cos²⟩ − iκ]α + η0⟨cos⟩}.
pub fn cavity_rhs(alpha: Complex64, overlap: ModeOverlap, params: &PhysicalParams) -> Complex64 {
    let coeff = Complex64::new(-params.delta_c + params.u0 * overlap.cos2, -params.kappa);
    -Complex64::i() * (coeff * alpha + params.eta0 * overlap.cos)
}

/// Stationary amplitude η0⟨cos⟩ / (Δc − U0⟨cos²⟩ + iκ) for frozen atoms.
pub fn cavity_fixed_point(overlap: ModeOverlap, params: &PhysicalParams) -> Complex64 {
    let denom = Complex64::new(params.delta_c - params.u0 * overlap.cos2, params.kappa);
    params.eta0 * overlap.cos / denom
}

/// Exact solution of the linear cavity equation over `dt` with the atomic
/// overlaps held fixed: α(dt) = α_ss + (α − α_ss) e^{λ dt}.
pub fn cavity_exact_step(
    alpha: Complex64,
    overlap: ModeOverlap,
    params: &PhysicalParams,
    dt: f64,
) -> Complex64 {
    let lambda = Complex64::new(-params.kappa, params.delta_c - params.u0 * overlap.cos2);
    let ss = cavity_fixed_point(overlap, params);
    ss + (alpha - ss) * (lambda * dt).exp()
}
