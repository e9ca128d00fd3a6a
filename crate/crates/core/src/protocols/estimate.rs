use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::ramsey::RamseyConfig;
use super::record::PhotonRecord;
use crate::analytics::{rabi_error_propagation, ramsey_error_propagation, steady_state_photons};
use crate::error::{Error, Result};
use crate::model::PhysicalParams;

/// |sin φ| below which the Ramsey uncertainty is reported as divergent.
pub const SIN_PHI_FLOOR: f64 = 1e-2;

/// Minimum ratio of the periodogram peak to its median for a tone to count
/// as detected.
pub const PEAK_TO_MEDIAN: f64 = 25.0;

/// Minimum fitted amplitude relative to the largest |sample|; weaker tones
/// are indistinguishable from integration round-off on a flat record.
pub const MIN_MODULATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldEstimate {
    /// Field estimate [T].
    pub b: f64,
    /// One-standard-deviation error-propagation uncertainty [T].
    pub uncertainty: f64,
    /// The normalised signal left [−1, 1] and was clipped.
    pub clipped: bool,
    /// The working point sits where the uncertainty diverges.
    pub divergent: bool,
}

/// B∥ from a Ramsey record with |α0|² from the superradiant steady state.
pub fn estimate_b_parallel(
    record: &PhotonRecord,
    params: &PhysicalParams,
    cfg: &RamseyConfig,
) -> Result<FieldEstimate> {
    estimate_b_parallel_with(record, params, cfg, steady_state_photons(params))
}

/// Inverts cos φ = δn/(κt|α0|²), b = φ/(γτ), with the supplied |α0|².
/// The estimate is confined to φ ∈ [0, π].
pub fn estimate_b_parallel_with(
    record: &PhotonRecord,
    params: &PhysicalParams,
    cfg: &RamseyConfig,
    alpha0_sq: f64,
) -> Result<FieldEstimate> {
    cfg.validate()?;
    if record.is_empty() {
        return Err(Error::Estimation("empty photon record".into()));
    }
    if !(alpha0_sq > 0.0 && alpha0_sq.is_finite()) {
        return Err(Error::Estimation(format!("|alpha0|^2 must be positive (got {alpha0_sq})")));
    }
    let dn = record.values().iter().sum::<f64>() / record.len() as f64;
    let kt = params.kappa_lab() * cfg.t_meas;
    let ratio = dn / (kt * alpha0_sq);
    let clipped = ratio.abs() > 1.0;
    if clipped {
        log::warn!("normalised Ramsey signal {ratio:.6} outside [-1, 1]; clipped");
    }
    let phi = ratio.clamp(-1.0, 1.0).acos();
    let gt = params.gamma_gyro * cfg.tau;
    let b = phi / gt;
    let divergent = phi.sin().abs() < SIN_PHI_FLOOR;
    let uncertainty = if phi.sin() == 0.0 {
        f64::INFINITY
    } else {
        ramsey_error_propagation(b, alpha0_sq.sqrt(), kt, params.gamma_gyro, cfg.tau)
    };
    Ok(FieldEstimate {
        b,
        uncertainty,
        clipped,
        divergent,
    })
}

/// x(t) ≈ offset + amplitude·cos(ωt' + phase), t' measured from the first
/// sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineFit {
    pub omega: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub offset: f64,
    pub residual_rms: f64,
}

/// Frequency of the dominant tone of a uniformly sampled record: peak of a
/// zero-padded periodogram, refined by least squares of offset + a·cos ωt +
/// b·sin ωt over ω.
pub fn estimate_frequency(t: &[f64], x: &[f64]) -> Result<SineFit> {
    let n = t.len();
    if n != x.len() || n < 8 {
        return Err(Error::Estimation(
            "frequency fit needs matching series with at least 8 samples".into(),
        ));
    }
    if t.iter().chain(x).any(|v| !v.is_finite()) {
        return Err(Error::Estimation("record contains non-finite values".into()));
    }
    let span = t[n - 1] - t[0];
    let dt = span / (n - 1) as f64;
    if !(dt > 0.0) || t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
        return Err(Error::Estimation("frequency fit needs uniform, increasing timestamps".into()));
    }

    let mean = x.iter().sum::<f64>() / n as f64;
    let pad = (8 * n).next_power_of_two();
    let mut buf: Vec<Complex64> = x.iter().map(|v| Complex64::new(v - mean, 0.0)).collect();
    buf.resize(pad, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(pad).process(&mut buf);
    let power: Vec<f64> = buf[1..pad / 2].iter().map(|z| z.norm_sqr()).collect();
    let (k, peak) = power
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (i, &p)| if p > best.1 { (i, p) } else { best });
    let mut sorted = power.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let median = sorted[sorted.len() / 2];
    if !(peak > 0.0) || peak < PEAK_TO_MEDIAN * median {
        return Err(Error::Estimation(format!(
            "no spectral peak above the noise floor (peak/median = {:.2})",
            if median > 0.0 { peak / median } else { 0.0 }
        )));
    }
    let omega0 = 2.0 * PI * (k + 1) as f64 / (pad as f64 * dt);

    let t_rel: Vec<f64> = t.iter().map(|v| v - t[0]).collect();
    let half = PI / span;
    let lo = (omega0 - half).max(0.25 * omega0);
    let omega = golden_min(|w| lsq(&t_rel, x, w).3, lo, omega0 + half);
    let (c, a, b, rss) = lsq(&t_rel, x, omega);
    if span * omega < 2.0 * 2.0 * PI {
        return Err(Error::Estimation(format!(
            "record spans {:.2} oscillation periods, need at least 2",
            span * omega / (2.0 * PI)
        )));
    }
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if a.hypot(b) < MIN_MODULATION * scale {
        return Err(Error::Estimation(format!(
            "modulation depth {:.2e} below {MIN_MODULATION:e}: record is flat",
            a.hypot(b) / scale
        )));
    }
    Ok(SineFit {
        omega,
        amplitude: a.hypot(b),
        phase: (-b).atan2(a),
        offset: c,
        residual_rms: (rss / n as f64).sqrt(),
    })
}

/// B⊥ = Ω/γ from the oscillation frequency of a Rabi record; uncertainty
/// from error propagation at the final sample time.
pub fn estimate_b_perp(record: &PhotonRecord, params: &PhysicalParams) -> Result<FieldEstimate> {
    let t = record.times();
    let fit = estimate_frequency(&t, &record.values())?;
    let b = fit.omega / params.gamma_gyro;
    let dt = t[1] - t[0];
    let t_final = t[t.len() - 1];
    let alpha0 = steady_state_photons(params).sqrt();
    let uncertainty = rabi_error_propagation(b, alpha0, params.kappa_lab() * dt, params.gamma_gyro, t_final);
    let divergent = (fit.omega * t_final).sin().abs() < SIN_PHI_FLOOR;
    Ok(FieldEstimate {
        b,
        uncertainty,
        clipped: false,
        divergent,
    })
}

/// (offset, cos coefficient, sin coefficient, residual sum of squares).
fn lsq(t: &[f64], x: &[f64], omega: f64) -> (f64, f64, f64, f64) {
    let mut m = [[0.0f64; 3]; 3];
    let mut r = [0.0f64; 3];
    for (&ti, &xi) in t.iter().zip(x) {
        let (s, c) = (omega * ti).sin_cos();
        let basis = [1.0, c, s];
        for i in 0..3 {
            r[i] += basis[i] * xi;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let beta = solve3(m, r);
    let rss = t
        .iter()
        .zip(x)
        .map(|(&ti, &xi)| {
            let (s, c) = (omega * ti).sin_cos();
            (xi - beta[0] - beta[1] * c - beta[2] * s).powi(2)
        })
        .sum();
    (beta[0], beta[1], beta[2], rss)
}

/// Gaussian elimination with partial pivoting; singular systems give zeros.
fn solve3(mut m: [[f64; 3]; 3], mut r: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, piv);
        r.swap(col, piv);
        if m[col][col] == 0.0 {
            return [0.0; 3];
        }
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            r[row] -= f * r[col];
        }
    }
    let mut out = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| m[row][k] * out[k]).sum();
        out[row] = (r[row] - s) / m[row][row];
    }
    out
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-13 * (a.abs() + b.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
