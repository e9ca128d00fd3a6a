use std::path::PathBuf;

use cavmag::analytics::{
    classify_regime, sensitivity_rabi, sensitivity_ramsey, sensitivity_single_mode,
    steady_state_photons, RegimeReport,
};
use cavmag::dynamics::evolve;
use cavmag::effective::{derive_channel, derive_effective_params, ChannelConstants, RamanChannel};
use cavmag::protocols::{
    calibrate_alpha0, driven_response, estimate_b_parallel_with, estimate_b_perp, run_rabi,
    run_ramsey, FieldEstimate, PhotonRecord,
};
use cavmag::stochastic::run_ensemble;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{set_param, Format, RunConfig};
use crate::error::CliError;
use crate::output::{csv, json_report, series_csv, series_rows, write, SERIES_COLUMNS};
use crate::SchemeArg;

/// Files written by a command and, for report-style commands, the report
/// echoed on stdout.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub stdout: Option<String>,
}

type Res = Result<Outcome, CliError>;

fn files(files: Vec<PathBuf>) -> Res {
    Ok(Outcome { files, stdout: None })
}

pub fn simulate(cfg: &RunConfig) -> Res {
    let p = &cfg.model;
    let state = cfg.initial_state(p)?;
    let (series, _) = evolve(&state, p, &cfg.step.step_config(p), cfg.step.t_final)?;
    let dir = &cfg.output.dir;
    let path = match cfg.output.format {
        Format::Csv => write(dir, "simulate.csv", &series_csv(cfg, &series))?,
        Format::Json => write(dir, "simulate.json", &json_report(cfg, &series))?,
    };
    files(vec![path])
}

#[derive(Serialize)]
struct EnsembleReport<'a> {
    trajectories: usize,
    seeds: &'a [u64],
    failures: &'a [(u64, String)],
    max_norm_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean: Option<&'a cavmag::dynamics::TimeSeries>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stderr: Option<&'a cavmag::dynamics::TimeSeries>,
}

pub fn trajectories(cfg: &RunConfig) -> Res {
    let p = &cfg.model;
    let state = cfg.initial_state(p)?;
    let e = run_ensemble(
        &state,
        p,
        &cfg.step.step_config(p),
        &cfg.noise_config(),
        cfg.noise.trajectories,
        cfg.step.t_final,
    )?;
    let json = cfg.output.format == Format::Json;
    let report = EnsembleReport {
        trajectories: e.len(),
        seeds: &e.seeds,
        failures: &e.failures,
        max_norm_drift: e.norm_drift.iter().cloned().fold(0.0, f64::max),
        mean: json.then_some(&e.mean),
        stderr: json.then_some(&e.stderr),
    };
    let dir = &cfg.output.dir;
    let mut out = vec![write(dir, "trajectories.json", &json_report(cfg, &report))?];
    if !json {
        let mut columns: Vec<&str> = SERIES_COLUMNS.to_vec();
        columns.extend(["deltaN_err", "n1_err", "n2_err", "deltan_err", "phase_err"]);
        let rows = series_rows(&e.mean).zip(series_rows(&e.stderr)).map(|(m, s)| {
            let mut r = m.to_vec();
            r.extend_from_slice(&s[1..]);
            r
        });
        out.push(write(dir, "trajectories.csv", &csv(cfg, &columns, rows))?);
    }
    files(out)
}

#[derive(Serialize)]
struct RamseyRun {
    record: PhotonRecord,
    estimate: FieldEstimate,
}

#[derive(Serialize)]
struct RamseyReport {
    b_true: f64,
    phase: f64,
    alpha0_sq: f64,
    calibrated: bool,
    mean_b: f64,
    sd_b: f64,
    runs: Vec<RamseyRun>,
}

pub fn ramsey(cfg: &RunConfig) -> Res {
    let p = &cfg.model;
    let rc = cfg.protocol.ramsey(p);
    let grid = cfg.grid()?;
    let alpha0_sq = if cfg.protocol.calibrate {
        calibrate_alpha0(p, grid.clone(), &rc)?
    } else {
        steady_state_photons(p)
    };
    let runs = (0..cfg.protocol.repetitions as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i));
            let (record, _) = run_ramsey(p, grid.clone(), &rc, &mut rng)?;
            let estimate = estimate_b_parallel_with(&record, p, &rc, alpha0_sq)?;
            Ok(RamseyRun { record, estimate })
        })
        .collect::<Result<Vec<_>, cavmag::Error>>()?;
    let bs: Vec<f64> = runs.iter().map(|r| r.estimate.b).collect();
    let mean_b = bs.iter().sum::<f64>() / bs.len() as f64;
    let sd_b = if bs.len() > 1 {
        (bs.iter().map(|b| (b - mean_b).powi(2)).sum::<f64>() / (bs.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    let dir = &cfg.output.dir;
    let mut out = Vec::new();
    if cfg.output.format == Format::Csv {
        let rows = runs.iter().enumerate().map(|(i, r)| {
            let (t, dn) = r.record.samples[0];
            let [n1, n2] = r.record.mode_counts[0];
            vec![i as f64, t, dn, n1, n2, r.estimate.b, r.estimate.uncertainty]
        });
        let columns = ["rep", "t", "deltan", "n1", "n2", "b", "uncertainty"];
        out.push(write(dir, "ramsey.csv", &csv(cfg, &columns, rows))?);
    }
    let report = RamseyReport {
        b_true: rc.b_true,
        phase: rc.phase(p),
        alpha0_sq,
        calibrated: cfg.protocol.calibrate,
        mean_b,
        sd_b,
        runs,
    };
    out.push(write(dir, "ramsey.json", &json_report(cfg, &report))?);
    files(out)
}

#[derive(Serialize)]
struct RabiReport<'a> {
    b_true: f64,
    omega: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    record: Option<&'a PhotonRecord>,
    estimate: Option<FieldEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// The record is written even when the estimator fails; the failure then
/// sets the exit status.
pub fn rabi(cfg: &RunConfig) -> Res {
    let p = &cfg.model;
    let rc = cfg.protocol.rabi(p);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let record = run_rabi(p, cfg.grid()?, &rc, &mut rng)?;
    let estimate = estimate_b_perp(&record, p);
    let json = cfg.output.format == Format::Json;
    let report = RabiReport {
        b_true: rc.b_true,
        omega: p.gamma_gyro * rc.b_true,
        record: json.then_some(&record),
        estimate: estimate.as_ref().ok().copied(),
        error: estimate.as_ref().err().map(|e| e.to_string()),
    };
    let dir = &cfg.output.dir;
    let mut out = Vec::new();
    if !json {
        let rows = record
            .samples
            .iter()
            .zip(&record.mode_counts)
            .map(|(&(t, dn), &[n1, n2])| vec![t, dn, n1, n2]);
        out.push(write(dir, "rabi.csv", &csv(cfg, &["t", "deltan", "n1", "n2"], rows))?);
    }
    out.push(write(dir, "rabi.json", &json_report(cfg, &report))?);
    estimate?;
    files(out)
}

pub fn scan(cfg: &RunConfig) -> Res {
    let scan = cfg
        .scan
        .as_ref()
        .ok_or_else(|| CliError::Config(vec!["scan needs a [scan] section or --param/--values".into()]))?;
    let points = scan
        .values
        .par_iter()
        .map(|&v| {
            let p = set_param(&cfg.model, &scan.param, v).map_err(|e| CliError::Config(vec![e]))?;
            let state = cfg.initial_state(&p)?;
            let step = cfg.step.step_config(&p);
            let (series, _) = evolve(&state, &p, &step, cfg.step.t_final)?;
            Ok((v, series))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let dir = &cfg.output.dir;
    let path = match cfg.output.format {
        Format::Csv => {
            let mut columns = vec![scan.param.as_str()];
            columns.extend(SERIES_COLUMNS);
            let rows = points.iter().flat_map(|(v, s)| {
                series_rows(s).map(move |r| {
                    let mut row = vec![*v];
                    row.extend_from_slice(&r);
                    row
                })
            });
            write(dir, "scan.csv", &csv(cfg, &columns, rows))?
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Point<'a> {
                value: f64,
                series: &'a cavmag::dynamics::TimeSeries,
            }
            let pts: Vec<Point> = points.iter().map(|(v, s)| Point { value: *v, series: s }).collect();
            write(dir, "scan.json", &json_report(cfg, &pts))?
        }
    };
    files(vec![path])
}

pub fn sensitivity(cfg: &RunConfig, scheme: SchemeArg) -> Res {
    let p = &cfg.model;
    let pr = &cfg.protocol;
    let report = match scheme {
        SchemeArg::Ramsey => sensitivity_ramsey(p, pr.tau, pr.t_meas, pr.t_cycle)?,
        SchemeArg::Rabi => sensitivity_rabi(p, pr.duration, pr.dt_window, pr.t_cycle)?,
        SchemeArg::SingleMode => sensitivity_single_mode(p, pr.tau, pr.t_meas, pr.t_cycle)?,
    };
    let path = write(&cfg.output.dir, "sensitivity.json", &json_report(cfg, &report))?;
    Ok(Outcome {
        files: vec![path],
        stdout: Some(serde_json::to_string(&report).expect("report serializes")),
    })
}

#[derive(Serialize)]
struct DerivedParams {
    channels: Vec<ChannelConstants>,
    delta: Option<f64>,
}

pub fn derive_params(
    cfg: &RunConfig,
    first: (f64, f64, f64),
    second: Option<(f64, f64, f64)>,
    omega_g2: f64,
) -> Res {
    let ch = |(g, omega_pump, delta_atom)| RamanChannel { g, omega_pump, delta_atom };
    let report = match second {
        Some(s) => {
            let e = derive_effective_params(&ch(first), &ch(s), omega_g2)?;
            DerivedParams { channels: e.channels.to_vec(), delta: Some(e.delta) }
        }
        None => DerivedParams { channels: vec![derive_channel(&ch(first))?], delta: None },
    };
    let path = write(&cfg.output.dir, "derive-params.json", &json_report(cfg, &report))?;
    Ok(Outcome {
        files: vec![path],
        stdout: Some(serde_json::to_string(&report).expect("report serializes")),
    })
}

#[derive(Serialize)]
struct RegimeEntry {
    #[serde(flatten)]
    analytic: RegimeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    simulated_lag: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    simulated_amplitude: Option<f64>,
}

pub fn regimes(cfg: &RunConfig, omega: Option<&[f64]>, simulate: bool, periods: f64) -> Res {
    let p = &cfg.model;
    let dc = p.delta_c.abs();
    let omegas = omega.map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.1 * dc, dc, 3.0 * dc]);
    let grid = cfg.grid()?;
    let entries = omegas
        .par_iter()
        .map(|&w| {
            let analytic = classify_regime(w, p)?;
            let (simulated_lag, simulated_amplitude) = if simulate {
                let r = driven_response(
                    p,
                    grid.clone(),
                    &cfg.step.step_config(p),
                    &cfg.step.relax_config(),
                    w,
                    periods,
                )?;
                (Some(r.lag), Some(r.amplitude))
            } else {
                (None, None)
            };
            Ok(RegimeEntry { analytic, simulated_lag, simulated_amplitude })
        })
        .collect::<Result<Vec<_>, cavmag::Error>>()?;
    let path = write(&cfg.output.dir, "regimes.json", &json_report(cfg, &entries))?;
    Ok(Outcome {
        files: vec![path],
        stdout: Some(serde_json::to_string(&entries).expect("report serializes")),
    })
}
