use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::noise::{CavityNoise, NoiseConfig};
use crate::dynamics::{evolve_with, StepConfig, Stepper, TimeSeries, CHANNELS};
use crate::error::{Error, Result};
use crate::model::{PhysicalParams, SystemState};

/// Fraction of failed trajectories above which an ensemble is abandoned.
pub const ENSEMBLE_FAILURE_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnsemble {
    /// Successful trajectories, in seed order.
    pub trajectories: Vec<TimeSeries>,
    pub seeds: Vec<u64>,
    pub mean: TimeSeries,
    /// Sample standard deviation over √M, per sample and channel.
    pub stderr: TimeSeries,
    /// Relative atom-number change |N(t_final) − N(0)|/N(0) per trajectory.
    pub norm_drift: Vec<f64>,
    /// Seeds of excluded trajectories with their failure messages.
    pub failures: Vec<(u64, String)>,
}

impl TrajectoryEnsemble {
    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }
}

/// Runs `m_traj` noisy trajectories from `initial` to `t_final` with seeds
/// `noise.seed + i`. Trajectories may execute in parallel; reduction always
/// happens in seed order so results do not depend on the thread count.
pub fn run_ensemble(
    initial: &SystemState,
    params: &PhysicalParams,
    cfg: &StepConfig,
    noise: &NoiseConfig,
    m_traj: usize,
    t_final: f64,
) -> Result<TrajectoryEnsemble> {
    if m_traj == 0 {
        return Err(Error::invalid("ensemble needs at least one trajectory"));
    }
    noise.validate()?;
    let proto = Stepper::new(initial.grid.clone(), params, cfg)?;
    let n0 = initial.norm();

    let results: Vec<(u64, Result<(TimeSeries, f64)>)> = (0..m_traj as u64)
        .into_par_iter()
        .map(|i| {
            let seed = noise.seed.wrapping_add(i);
            let mut stepper = proto.clone();
            let mut kick = CavityNoise::new(params, noise, seed);
            let mut state = initial.clone();
            let out = evolve_with(&mut stepper, &mut state, t_final, Some(&mut kick))
                .map(|series| (series, (state.norm() - n0).abs() / n0));
            (seed, out)
        })
        .collect();

    let mut trajectories = Vec::with_capacity(m_traj);
    let mut seeds = Vec::with_capacity(m_traj);
    let mut norm_drift = Vec::with_capacity(m_traj);
    let mut failures = Vec::new();
    for (seed, r) in results {
        match r {
            Ok((series, drift)) => {
                trajectories.push(series);
                seeds.push(seed);
                norm_drift.push(drift);
            }
            Err(e) if e.is_numerical() => failures.push((seed, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    if failures.len() as f64 > ENSEMBLE_FAILURE_LIMIT * m_traj as f64 || trajectories.is_empty() {
        return Err(Error::EnsembleAborted {
            failed: failures.len(),
            total: m_traj,
        });
    }
    if !failures.is_empty() {
        log::warn!("{} of {} trajectories failed and were excluded", failures.len(), m_traj);
    }
    let (mean, stderr) = reduce(&trajectories);
    Ok(TrajectoryEnsemble {
        trajectories,
        seeds,
        mean,
        stderr,
        norm_drift,
        failures,
    })
}

fn reduce(runs: &[TimeSeries]) -> (TimeSeries, TimeSeries) {
    let m = runs.len() as f64;
    let n = runs[0].len();
    let mut mean = TimeSeries {
        t: runs[0].t.clone(),
        ..Default::default()
    };
    let mut stderr = mean.clone();
    for c in CHANNELS {
        let mu: Vec<f64> = (0..n)
            .map(|i| runs.iter().map(|r| r.channel(c)[i]).sum::<f64>() / m)
            .collect();
        let se: Vec<f64> = (0..n)
            .map(|i| {
                if runs.len() < 2 {
                    return 0.0;
                }
                let ss: f64 = runs.iter().map(|r| (r.channel(c)[i] - mu[i]).powi(2)).sum();
                (ss / (m - 1.0)).sqrt() / m.sqrt()
            })
            .collect();
        *mean.channel_mut(c) = mu;
        *stderr.channel_mut(c) = se;
    }
    (mean, stderr)
}
