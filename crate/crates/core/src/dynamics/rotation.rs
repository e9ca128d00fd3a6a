use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::SystemState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// SU(2) matrix exp(+i·angle·σ_n/2) acting on (ψ1, ψ2).
///
/// With |θ, φ⟩ ∝ (e^{iφ}cos θ/2, sin θ/2) this sense gives
/// R_x(π/2)|π/2, φ⟩ = |π/2 − φ, 0⟩ and R_z(a)|θ, φ⟩ = |θ, φ + a⟩.
pub fn rotation_matrix(axis: Axis, angle: f64) -> [[Complex64; 2]; 2] {
    let c = (angle / 2.0).cos();
    let s = (angle / 2.0).sin();
    let re = |v: f64| Complex64::new(v, 0.0);
    match axis {
        Axis::X => [[re(c), Complex64::new(0.0, s)], [Complex64::new(0.0, s), re(c)]],
        Axis::Y => [[re(c), re(s)], [re(-s), re(c)]],
        Axis::Z => [
            [Complex64::from_polar(1.0, angle / 2.0), re(0.0)],
            [re(0.0), Complex64::from_polar(1.0, -angle / 2.0)],
        ],
    }
}

/// Instantaneous Bloch-sphere pulse applied pointwise; cavity amplitudes and
/// time are left alone.
pub fn apply_rotation(state: &SystemState, axis: Axis, angle: f64) -> SystemState {
    let mut out = state.clone();
    rotate_in_place(&mut out, axis, angle);
    out
}

pub fn rotate_in_place(state: &mut SystemState, axis: Axis, angle: f64) {
    let m = rotation_matrix(axis, angle);
    for (a, b) in state.psi1.iter_mut().zip(state.psi2.iter_mut()) {
        let (p1, p2) = (*a, *b);
        *a = m[0][0] * p1 + m[0][1] * p2;
        *b = m[1][0] * p1 + m[1][1] * p2;
    }
}
