use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares power law bound ∝ N^exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    /// Standard error of the exponent from the fit residuals.
    pub stderr: f64,
    /// Prefactor in log space: ln(bound) ≈ intercept + exponent·ln N.
    pub intercept: f64,
    pub points: usize,
}

pub const MIN_SCALING_POINTS: usize = 3;
pub const MIN_SCALING_DECADES: f64 = 1.5;

pub fn scaling_fit(n_values: &[f64], bounds: &[f64]) -> Result<ScalingFit> {
    if n_values.len() != bounds.len() {
        return Err(Error::invalid("n_values and bounds differ in length"));
    }
    let k = n_values.len();
    if k < MIN_SCALING_POINTS {
        return Err(Error::invalid(format!(
            "scaling fit needs at least {MIN_SCALING_POINTS} points (got {k})"
        )));
    }
    if n_values.iter().chain(bounds).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::invalid("scaling fit needs positive finite values"));
    }
    let x: Vec<f64> = n_values.iter().map(|n| n.ln()).collect();
    let y: Vec<f64> = bounds.iter().map(|b| b.ln()).collect();
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let decades = (hi - lo) / std::f64::consts::LN_10;
    if decades < MIN_SCALING_DECADES {
        return Err(Error::invalid(format!(
            "N values span {decades:.2} decades, need at least {MIN_SCALING_DECADES}"
        )));
    }
    let kf = k as f64;
    let mx = x.iter().sum::<f64>() / kf;
    let my = y.iter().sum::<f64>() / kf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let rss: f64 = x
        .iter()
        .zip(&y)
        .map(|(a, b)| (b - intercept - exponent * a).powi(2))
        .sum();
    let stderr = if k > 2 { (rss / (kf - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(ScalingFit {
        exponent,
        stderr,
        intercept,
        points: k,
    })
}
