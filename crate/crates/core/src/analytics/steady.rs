use num_complex::Complex64;

use crate::model::PhysicalParams;

/// Superradiant photon number for all N atoms localized in one mode:
/// n_ss = N²η0² / [(Δc − NU0)² + κ²].
pub fn steady_state_photons(params: &PhysicalParams) -> f64 {
    let n = params.n_atoms;
    let detuning = params.delta_c - n * params.u0;
    (n * params.eta0).powi(2) / (detuning * detuning + params.kappa * params.kappa)
}

/// Stationary cavity amplitudes (α₁, α₂) for atoms Rabi-flopping as
/// δN = N cos(Ω t̃), t̃ = t − t0, with the dispersive shift neglected.
///
/// Solves i dα_j/dt = −(Δc + iκ)α_j − Nη0 w_j(t̃) with w₁ = cos²(Ωt̃/2),
/// w₂ = sin²(Ωt̃/2). Writing z = Δc + iκ:
///
/// ```text
/// α_{1/2} = Nη0 [−z² + Ω² ∓ iΩz sin Ωt̃ ∓ z² cos Ωt̃] / (2z³ − 2Ω²z)
/// ```
pub fn analytic_cavity_fields(
    t: f64,
    omega: f64,
    t0: f64,
    params: &PhysicalParams,
) -> (Complex64, Complex64) {
    let z = Complex64::new(params.delta_c, params.kappa);
    let ph = omega * (t - t0);
    let (s, c) = ph.sin_cos();
    let nf = params.n_atoms * params.eta0;
    let denom = 2.0 * z * z * z - 2.0 * omega * omega * z;
    let base = -z * z + omega * omega;
    let osc = Complex64::i() * omega * z * s + z * z * c;
    (nf * (base - osc) / denom, nf * (base + osc) / denom)
}

fn delta_n_parts(omega: f64, params: &PhysicalParams) -> (f64, f64, f64) {
    let (d, k) = (params.delta_c, params.kappa);
    let (d2, k2, w2) = (d * d, k * k, omega * omega);
    let pre = (params.n_atoms * params.eta0).powi(2);
    let denom = (d2 + k2) * ((d - omega).powi(2) + k2) * ((d + omega).powi(2) + k2);
    let sin_coef = k * omega * (d2 + k2 + w2);
    let cos_coef = w2 * (k2 - d2) + (d2 + k2).powi(2);
    (pre * cos_coef / denom, pre * sin_coef / denom, denom)
}

/// δn(t̃) = |α₁|² − |α₂|² from [`analytic_cavity_fields`], in closed form:
///
/// ```text
/// δn = N²η0² [κΩ(Δc²+κ²+Ω²) sin Ωt̃ + (Ω²(κ²−Δc²) + (Δc²+κ²)²) cos Ωt̃]
///      / [(Δc²+κ²)((Δc−Ω)²+κ²)((Δc+Ω)²+κ²)]
/// ```
///
/// Positive at t̃ = 0 in the adiabatic limit, where it reduces to
/// N²η0² cos(Ωt̃)/(Δc²+κ²).
pub fn analytic_delta_n(t: f64, omega: f64, t0: f64, params: &PhysicalParams) -> f64 {
    let (a, b, _) = delta_n_parts(omega, params);
    let ph = omega * (t - t0);
    a * ph.cos() + b * ph.sin()
}

/// The same expression with the opposite overall sign, as it is commonly
/// quoted alongside the field solution with the ± labels swapped.
pub fn analytic_delta_n_printed(t: f64, omega: f64, t0: f64, params: &PhysicalParams) -> f64 {
    -analytic_delta_n(t, omega, t0, params)
}

/// Amplitude and lag of δn(t̃) = A cos(Ωt̃ − θ) relative to δN ∝ cos(Ωt̃).
/// θ ∈ [0, π].
pub fn analytic_response(omega: f64, params: &PhysicalParams) -> (f64, f64) {
    let (a, b, _) = delta_n_parts(omega, params);
    (a.hypot(b), b.atan2(a).abs())
}
