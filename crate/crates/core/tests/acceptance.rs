//! Acceptance run: one PASS/FAIL line per criterion with the measured values
//! and the tolerance they were held to. Failures are reported, not hidden;
//! the process exits 0 so the suite completes either way.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;
use std::time::Instant;

use cavmag::analytics::*;
use cavmag::dynamics::*;
use cavmag::model::*;
use cavmag::protocols::*;
use cavmag::stochastic::*;
use cavmag::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn grid() -> Arc<Grid> {
    Arc::new(make_grid(1, 256).unwrap())
}

fn fig2() -> PhysicalParams {
    PhysicalParams::figure2()
}

fn compensated() -> (StepConfig, RelaxConfig) {
    (
        StepConfig::for_params(&fig2()).with_light_shift(LightShift::Compensated),
        RelaxConfig::default().with_light_shift(LightShift::Compensated),
    )
}

/// Ordered state with every atom in component 1 and the cavity at rest
/// on its stationary value.
fn ordered(p: &PhysicalParams, relax: &RelaxConfig) -> Result<SystemState> {
    let seed = spin_coherent_state(p, grid(), 0.3, 0.0, 0.0)?;
    relax_ordered(&seed, p, relax)
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISS"
    }
}

// 1 ─ superradiant steady state
fn steady_state() -> Result<Outcome> {
    let start = Instant::now();
    let p = fig2();
    let mut s = ordered(&p, &RelaxConfig::default())?;
    s.alpha1 = Complex64::new(0.0, 0.0);
    s.alpha2 = Complex64::new(0.0, 0.0);
    let cfg = StepConfig::for_params(&p).with_record_every(100);
    let (series, _) = evolve(&s, &p, &cfg, 20.0 / p.kappa)?;
    let tail = series.after(15.0 / p.kappa);
    let total = tail.n1.iter().zip(&tail.n2).map(|(a, b)| a + b).sum::<f64>() / tail.len() as f64;
    let formula = steady_state_photons(&p);
    let rel = (total - formula).abs() / formula;
    let secs = start.elapsed().as_secs_f64();
    outcome(
        rel < 0.1 && secs < 120.0,
        format!(
            "photons {total:.4e} vs formula {formula:.4e} (rel {rel:.2e}, tol 0.1); runtime {secs:.1} s (limit 120 s)"
        ),
    )
}

// 2 ─ three photon-response regimes
fn regimes() -> Result<Outcome> {
    let p = fig2();
    let (step, relax) = compensated();
    let step = step.with_record_every(2);
    let dc = p.delta_c.abs();
    let mut r = Vec::new();
    for f in [0.1, 1.0, 3.0] {
        r.push(driven_response(&p, grid(), &step, &relax, f * dc, 10.0)?);
    }
    let targets = [(0.0, 0.3), (FRAC_PI_2, 0.3), (PI, 0.2)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (resp, (target, tol)) in r.iter().zip(targets) {
        let ok = (resp.lag - target).abs() <= tol;
        pass &= ok;
        let analytic = analytic_response(resp.omega, &p).1;
        parts.push(format!(
            "lag(Ω={:.0}) {:.3} vs {target:.3}±{tol} [{}] (closed form {analytic:.3})",
            resp.omega,
            resp.lag,
            mark(ok)
        ));
    }
    let (a0, a1, a3) = (r[0].amplitude, r[1].amplitude, r[2].amplitude);
    let up = a1 > a0;
    let down = a3 < a0;
    pass &= up && down;
    parts.push(format!(
        "amplitude resonant/adiabatic {:.3} > 1 [{}], fast/adiabatic {:.3} < 1 [{}]",
        a1 / a0,
        mark(up),
        a3 / a0,
        mark(down)
    ));
    outcome(pass, parts.join("; "))
}

// 3 ─ closed-form cavity response without dispersive shift
fn oracle_rms(omega: f64) -> Result<f64> {
    let p = fig2().with_rabi_frequency(omega).with_rabi_resonance();
    let relax = RelaxConfig::default()
        .with_light_shift(LightShift::Compensated)
        .with_dispersive_shift(false);
    let start = ordered(&p, &relax)?;
    let cfg = StepConfig::for_params(&p)
        .with_light_shift(LightShift::Compensated)
        .with_dispersive_shift(false)
        .with_record_every(2);
    let skip = 5.0 / p.kappa;
    let (series, _) = evolve(&start, &p, &cfg, skip + 10.0 * 2.0 * PI / omega)?;
    let s = series.after(skip);
    let (mut res, mut norm) = (0.0, 0.0);
    for (&t, &dn) in s.t.iter().zip(&s.delta_photons) {
        let a = analytic_delta_n(t, omega, 0.0, &p);
        res += (dn - a).powi(2);
        norm += a * a;
    }
    Ok((res / norm).sqrt())
}

fn oracle() -> Result<Outcome> {
    let dc = fig2().delta_c.abs();
    let slow = oracle_rms(0.1 * dc)?;
    let fast = oracle_rms(3.0 * dc)?;
    outcome(
        slow < 0.05 && fast < 0.05,
        format!("relative rms adiabatic {slow:.2e}, fast {fast:.2e} (tol 5e-2)"),
    )
}

// 4 ─ stochastic averaging
fn averaging() -> Result<Outcome> {
    let mut p = fig2().with_rabi_frequency(330.0).with_rabi_resonance();
    p.epsilon = 0.5;
    let (step, relax) = compensated();
    let cfg = step.with_dt(StepConfig::default_dt(&p)).with_record_every(10);
    let s = ordered(&p, &relax)?;
    let t_final = 2.0 * 2.0 * PI / 330.0;
    let (det, _) = evolve(&s, &p, &cfg, t_final)?;
    let small = run_ensemble(&s, &p, &cfg, &NoiseConfig::new(p.epsilon, 7), 100, t_final)?;
    let large = run_ensemble(&s, &p, &cfg, &NoiseConfig::new(p.epsilon, 100_007), 400, t_final)?;

    let noisy: Vec<usize> = (0..det.len()).filter(|&i| small.stderr.delta_photons[i] > 0.0).collect();
    let inside = noisy
        .iter()
        .filter(|&&i| {
            (small.mean.delta_photons[i] - det.delta_photons[i]).abs()
                <= 3.0 * small.stderr.delta_photons[i]
        })
        .count();
    let frac = inside as f64 / noisy.len() as f64;
    let avg = |e: &TrajectoryEnsemble| noisy.iter().map(|&i| e.stderr.delta_photons[i]).sum::<f64>();
    let ratio = avg(&small) / avg(&large);
    let drift = small
        .norm_drift
        .iter()
        .chain(&large.norm_drift)
        .cloned()
        .fold(0.0, f64::max);
    let failures = small.failures.len() + large.failures.len();
    let ok_frac = frac >= 0.99;
    let ok_ratio = (ratio / 2.0 - 1.0).abs() < 0.3;
    let ok_drift = drift < 1e-6 && failures == 0;
    outcome(
        ok_frac && ok_ratio && ok_drift,
        format!(
            "within 3 stderr {inside}/{} = {frac:.4} (tol >= 0.99) [{}]; stderr ratio M=100/400 {ratio:.3} (2 ± 30%) [{}]; max norm drift {drift:.1e} (tol 1e-6), failures {failures} [{}]",
            noisy.len(),
            mark(ok_frac),
            mark(ok_ratio),
            mark(ok_drift)
        ),
    )
}

// 5 ─ sensitivity orders of magnitude
fn orders() -> Result<Outcome> {
    let p = fig2();
    let ramsey = sensitivity_ramsey(&p, 0.01, 0.01, 1.0)?.bound;
    // Detection window: the cavity response time 1/κ.
    let window = 1.0 / p.kappa_lab();
    let rabi = sensitivity_rabi(&p, 0.01, window, 1.0)?.bound;
    let rabi_10us = sensitivity_rabi(&p, 0.01, 1e-5, 1.0)?.bound;
    let ok_r = (0.1e-15..=10e-15).contains(&ramsey);
    let ok_b = (1e-12..=100e-12).contains(&rabi);
    outcome(
        ok_r && ok_b,
        format!(
            "Ramsey {:.3} fT/√Hz in [0.1, 10] [{}]; Rabi {:.3} pT/√Hz at δt = 1/κ = {:.3e} s in [1, 100] [{}] (δt = 10 µs would give {:.3} pT/√Hz)",
            ramsey * 1e15,
            mark(ok_r),
            rabi * 1e12,
            window,
            mark(ok_b),
            rabi_10us * 1e12
        ),
    )
}

// 6 ─ Heisenberg-like scaling from simulated photon numbers
fn scaling() -> Result<Outcome> {
    let ns = [1e2, 1e3, 1e4];
    let mut bounds = Vec::new();
    let mut ratios = Vec::new();
    for &n in &ns {
        let p = PhysicalParams { n_atoms: n, ..fig2() };
        let cfg = RamseyConfig::new(0.01, 0.01, 1.0, 0.0).with_readout(RamseyReadout::Simulated);
        let a0 = calibrate_alpha0(&p, grid(), &cfg)?;
        ratios.push(a0 / steady_state_photons(&p));
        bounds.push(sensitivity_ramsey_with(&p, a0, 0.01, 0.01, 1.0)?.bound);
    }
    let fit = scaling_fit(&ns, &bounds)?;
    outcome(
        (fit.exponent + 1.0).abs() <= 0.1,
        format!(
            "exponent {:.4} ± {:.1e} (target −1 ± 0.1); simulated/closed-form |α0|² = {:.4}, {:.4}, {:.4}",
            fit.exponent, fit.stderr, ratios[0], ratios[1], ratios[2]
        ),
    )
}

// 7 ─ Cramér–Rao consistency
fn cramer_rao() -> Result<Outcome> {
    let p = fig2();
    let gamma = p.gamma_gyro;
    let a0 = steady_state_photons(&p).sqrt();
    let kt = p.kappa_lab() * 0.01;
    // κδt with δt = 1/κ.
    let kdt = 1.0;
    let (tau, t) = (0.01, 0.01);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut drawn = 0;
    while drawn < 20 {
        let phi: f64 = rng.random_range(0.0..PI);
        if phi.sin().abs() <= 0.1 {
            continue;
        }
        drawn += 1;
        let b = phi / (gamma * tau);
        let m = AmplitudeModel::Ramsey { alpha0: a0, kappa_t: kt, gamma, tau };
        let q = qfi_bound(m.derivative(b))?.bound;
        let e = ramsey_error_propagation(b, a0, kt, gamma, tau);
        worst = worst.max((q - e).abs() / e);
        let b = phi / (gamma * t);
        let m = AmplitudeModel::Rabi { alpha0: a0, kappa_dt: kdt, gamma, t };
        let q = qfi_bound(m.derivative(b))?.bound;
        let e = rabi_error_propagation(b, a0, kdt, gamma, t);
        worst = worst.max((q - e).abs() / e);
    }
    // Single-mode detection at the optimal working point, derivatives by
    // finite differences.
    let b = FRAC_PI_2 / (gamma * tau);
    let two = AmplitudeModel::Ramsey { alpha0: a0, kappa_t: kt, gamma, tau };
    let one = AmplitudeModel::SingleMode { alpha0: a0, kappa_t: kt, gamma, tau };
    let ratio = qfi_bound(one.finite_difference(b))?.bound / qfi_bound(two.finite_difference(b))?.bound;
    let closed = sensitivity_single_mode(&p, tau, 0.01, 1.0)?.bound / sensitivity_ramsey(&p, tau, 0.01, 1.0)?.bound;
    let ok_q = worst < 1e-6;
    let ok_s = (ratio - 2.0).abs() < 1e-6 && (closed - 2.0).abs() < 1e-6;
    outcome(
        ok_q && ok_s,
        format!(
            "QFI vs error propagation, 40 bounds at 20 phases: max rel {worst:.1e} (tol 1e-6) [{}]; single-mode ratio {ratio:.9} (finite difference), {closed:.9} (closed form) (2 ± 1e-6) [{}]",
            mark(ok_q),
            mark(ok_s)
        ),
    )
}

// 8 ─ round-trip estimation
fn round_trip() -> Result<Outcome> {
    let p = fig2();
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst_r: f64 = 0.0;
    for k in 0..20 {
        let phi = 0.1 + (PI - 0.2) * (k as f64 + 0.5) / 20.0;
        let b = phi / (p.gamma_gyro * 0.01);
        let cfg = RamseyConfig::new(0.01, 1e-3, 1.0, b);
        let (rec, _) = run_ramsey(&p, g.clone(), &cfg, &mut rng)?;
        let est = estimate_b_parallel(&rec, &p, &cfg)?;
        worst_r = worst_r.max((est.b - b).abs() / b);
    }

    let b_perp = p.with_rabi_frequency(330.0).b_perp;
    let period = 2.0 * PI / (p.gamma_gyro * b_perp);
    let rc = RabiConfig::new(4.0 * period, period / 25.0, b_perp);
    let est = estimate_b_perp(&run_rabi(&p, g.clone(), &rc, &mut rng)?, &p)?;
    let rabi_err = (est.b - b_perp).abs() / b_perp;

    let b = 1e-9;
    let cfg = RamseyConfig::new(0.01, 1e-3, 1.0, b);
    let noisy = cfg.with_shot_noise(true);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let reps = 100;
    let mut est = Vec::with_capacity(reps);
    for _ in 0..reps {
        let (rec, _) = run_ramsey(&p, g.clone(), &noisy, &mut rng)?;
        est.push(estimate_b_parallel(&rec, &p, &noisy)?.b);
    }
    let mean = est.iter().sum::<f64>() / reps as f64;
    let sd = (est.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt();
    let (rec, _) = run_ramsey(&p, g, &cfg, &mut rng)?;
    let eq10 = estimate_b_parallel(&rec, &p, &cfg)?.uncertainty;
    let phi = cfg.phase(&p);
    // Poisson counts in both modes: var δn = κt|α0|²(1 + cos²φ)/2.
    let predicted = eq10 * ((1.0 + phi.cos().powi(2)) / 2.0).sqrt();
    let spread = sd / predicted;

    let ok_r = worst_r < 1e-6;
    let ok_b = rabi_err < 1e-2;
    let ok_s = (spread - 1.0).abs() < 0.3;
    outcome(
        ok_r && ok_b && ok_s,
        format!(
            "Ramsey worst rel error {worst_r:.1e} over 20 phases in (0.1, π−0.1) (tol 1e-6) [{}]; Rabi Ω=330 rel error {rabi_err:.1e} (tol 1e-2) [{}]; shot-noise spread / prediction {spread:.3} (1 ± 0.3) [{}]",
            mark(ok_r),
            mark(ok_b),
            mark(ok_s)
        ),
    )
}

// 9 ─ property suite
fn gentle() -> PhysicalParams {
    PhysicalParams {
        delta_c: -50.0,
        u0: -0.01,
        eta0: 5.0,
        kappa: 10.0,
        n_atoms: 100.0,
        delta: 3.0,
        ..fig2()
    }
    .with_rabi_frequency(20.0)
}

fn distance(a: &SystemState, b: &SystemState) -> f64 {
    let psi: f64 = a
        .psi1
        .iter()
        .zip(&b.psi1)
        .chain(a.psi2.iter().zip(&b.psi2))
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        * a.grid.spacing;
    (psi + (a.alpha1 - b.alpha1).norm_sqr() + (a.alpha2 - b.alpha2).norm_sqr()).sqrt()
}

fn properties() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut pass = true;
    let mut check = |ok: bool, text: String| {
        pass &= ok;
        parts.push(format!("{text} [{}]", mark(ok)));
    };

    // Norm at the reference point over 1000 time units' worth of budget.
    let p = fig2().with_rabi_frequency(330.0).with_rabi_resonance();
    let (step, relax) = compensated();
    let s = relax_ordered(&spin_coherent_state(&p, grid(), 1e-3, 0.0, 0.0)?, &p, &relax)?;
    let (_, last) = evolve(&s, &p, &step.with_record_every(1000), 0.5)?;
    let drift = (last.norm() - s.norm()).abs() / s.norm();
    check(drift < 1e-6, format!("norm drift {drift:.1e} (tol 1e-6)"));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut unit: f64 = 0.0;
    for _ in 0..100 {
        let axis = [Axis::X, Axis::Y, Axis::Z][rng.random_range(0..3)];
        let m = rotation_matrix(axis, rng.random_range(-10.0..10.0));
        for i in 0..2 {
            for j in 0..2 {
                let dot = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let id = if i == j { 1.0 } else { 0.0 };
                unit = unit.max((dot - id).norm());
            }
        }
    }
    check(unit < 1e-12, format!("rotation U†U − 1 {unit:.1e} (tol 1e-12)"));

    let omega = 50.0;
    let dp = PhysicalParams {
        delta_c: -100.0,
        u0: 0.0,
        eta0: 0.0,
        kappa: 10.0,
        n_atoms: 1e3,
        ..fig2()
    }
    .with_rabi_frequency(omega);
    let ds = spin_coherent_state(&dp, Arc::new(make_grid(1, 64)?), 0.2, 0.0, 0.0)?;
    let (series, _) = evolve(&ds, &dp, &StepConfig::for_params(&dp).with_record_every(50), 20.0 * PI / omega)?;
    let rabi = series
        .t
        .iter()
        .zip(&series.delta_atoms)
        .map(|(t, dn)| (dn - dp.n_atoms * (omega * t).cos()).abs() / dp.n_atoms)
        .fold(0.0, f64::max);
    check(rabi < 1e-8, format!("decoupled Rabi error {rabi:.1e} (tol 1e-8)"));

    let gp = gentle();
    let gs = initial_state(&gp, Arc::new(make_grid(1, 64)?), 0.3)?;
    let run = |dt: f64| -> Result<SystemState> {
        let cfg = StepConfig::for_params(&gp).with_dt(dt).with_record_every(1_000_000);
        Ok(evolve(&gs, &gp, &cfg, 0.4)?.1)
    };
    let (c, f, r) = (run(1e-3)?, run(5e-4)?, run(2.5e-4)?);
    let order = distance(&c, &r) / distance(&f, &r);
    check(order >= 3.5, format!("dt-halving error ratio {order:.2} (tol >= 3.5)"));

    let es = spin_coherent_state(&gp, Arc::new(make_grid(1, 32)?), 0.3, 0.0, 0.0)?;
    let ecfg = StepConfig::for_params(&gp).with_dt(1e-3).with_record_every(10);
    let noise = NoiseConfig::new(0.5, 42);
    let ens = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
            .install(|| run_ensemble(&es, &gp, &ecfg, &noise, 12, 0.2))
    };
    let same = ens(1)? == ens(3)?;
    check(same, format!("ensemble bit-identical across thread counts: {same}"));

    let cfg = step.with_record_every(50);
    let branch = |sign: f64| -> Result<TimeSeries> {
        let seed = spin_coherent_state(&p, grid(), sign * 1e-3, 0.0, 0.0)?;
        Ok(evolve(&relax_ordered(&seed, &p, &relax)?, &p, &cfg, 0.03)?.0)
    };
    let (a, b) = (branch(1.0)?, branch(-1.0)?);
    let scale = a.n1.iter().cloned().fold(0.0, f64::max);
    let z2 = (0..a.len())
        .map(|i| {
            [
                (a.n1[i] - b.n1[i]).abs(),
                (a.n2[i] - b.n2[i]).abs(),
                (a.delta_photons[i] - b.delta_photons[i]).abs(),
            ]
            .into_iter()
            .fold(0.0, f64::max)
                / scale
        })
        .fold(0.0, f64::max);
    check(z2 < 1e-6, format!("ℤ₂ mirror |α|², δn difference {z2:.1e} (tol 1e-6)"));

    outcome(pass, parts.join("; "))
}

/// Literal per-component light shift at the reference point: the spin stays
/// pinned, which is why the drive runs use the compensated form.
fn self_trapping() -> Result<String> {
    let p = fig2().with_rabi_frequency(330.0).with_rabi_resonance();
    let s = ordered(&p, &RelaxConfig::default())?;
    let cfg = StepConfig::for_params(&p).with_record_every(100);
    let (series, _) = evolve(&s, &p, &cfg, 4.0 * 2.0 * PI / 330.0)?;
    let min = series.delta_atoms.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(format!(
        "differential light shift at Ω=330: min δN/N over 4 drive periods = {:.4} (free precession would reach −1)",
        min / p.n_atoms
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 9] = [
        ("superradiant steady state", steady_state),
        ("three-regime photon response", regimes),
        ("closed-form cavity oracle", oracle),
        ("stochastic averaging", averaging),
        ("sensitivity orders", orders),
        ("Heisenberg-like scaling", scaling),
        ("Cramér-Rao consistency", cramer_rao),
        ("round-trip estimation", round_trip),
        ("property suite", properties),
    ];
    let mut passed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        passed += pass as usize;
        println!(
            "{} {}. {name}: {detail} ({:.1} s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    match self_trapping() {
        Ok(s) => println!("INFO {s}"),
        Err(e) => println!("INFO self-trapping run failed: {e}"),
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
}
