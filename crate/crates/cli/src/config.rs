use std::path::PathBuf;
use std::sync::Arc;

use cavmag::dynamics::{relax_ordered, Axis, LightShift, RelaxConfig, Scheme, StepConfig};
use cavmag::model::{make_grid, spin_coherent_state, Grid, PhysicalParams, SystemState};
use cavmag::protocols::{Interrogation, RabiConfig, RamseyConfig, RamseyReadout};
use cavmag::stochastic::{NoiseConfig, NoiseKind};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Everything needed to reproduce one invocation. Injected fields for the
/// protocols are the model's `b_parallel` (Ramsey) and `b_perp` (Rabi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed for every random stream of the run.
    pub seed: u64,
    pub model: PhysicalParams,
    pub grid: GridSection,
    pub step: StepSection,
    pub noise: NoiseSection,
    pub protocol: ProtocolSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSection>,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            model: PhysicalParams::figure2(),
            grid: GridSection::default(),
            step: StepSection::default(),
            noise: NoiseSection::default(),
            protocol: ProtocolSection::default(),
            scan: None,
            output: OutputSection::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CavityStart {
    /// Cavity amplitudes at their stationary value for the initial atoms.
    #[default]
    Stationary,
    /// Empty cavity; the field builds up from zero.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub periods: usize,
    pub points: usize,
    /// Amplitude of the cos(k_c x) seed; its sign picks the lattice branch.
    pub seed_amplitude: f64,
    /// Initial Bloch angles.
    pub theta: f64,
    pub phi: f64,
    /// Relax the seeded density into the self-ordered lattice first.
    pub relax: bool,
    pub cavity: CavityStart,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            periods: 1,
            points: 256,
            seed_amplitude: 0.3,
            theta: 0.0,
            phi: 0.0,
            relax: true,
            cavity: CavityStart::Stationary,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepSection {
    /// Time step in recoil units; omitted means the parameter-derived default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub scheme: Scheme,
    pub record_every: usize,
    pub dispersive_shift: bool,
    pub light_shift: LightShift,
    /// End time of `simulate`, `scan` and `trajectories` runs (recoil units).
    pub t_final: f64,
}

impl Default for StepSection {
    fn default() -> Self {
        Self {
            dt: None,
            scheme: Scheme::StrangSplit,
            record_every: 10,
            dispersive_shift: true,
            light_shift: LightShift::Differential,
            t_final: 0.1,
        }
    }
}

impl StepSection {
    pub fn step_config(&self, params: &PhysicalParams) -> StepConfig {
        StepConfig {
            dt: self.dt.unwrap_or_else(|| StepConfig::default_dt(params)),
            scheme: self.scheme,
            record_every: self.record_every,
            dispersive_shift: self.dispersive_shift,
            light_shift: self.light_shift,
        }
    }

    pub fn relax_config(&self) -> RelaxConfig {
        RelaxConfig::default()
            .with_light_shift(self.light_shift)
            .with_dispersive_shift(self.dispersive_shift)
    }
}

/// The measurement efficiency itself is the model's `epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    pub kind: NoiseKind,
    pub trajectories: usize,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            kind: NoiseKind::ComplexIsotropic,
            trajectories: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolSection {
    /// Ramsey interrogation time [s].
    pub tau: f64,
    /// Ramsey photon-collection time [s].
    pub t_meas: f64,
    /// Duration of one experiment [s].
    pub t_cycle: f64,
    pub shot_noise: bool,
    pub readout: RamseyReadout,
    pub readout_axis: Axis,
    pub interrogation: Interrogation,
    /// Use a simulated zero-field run to calibrate |α0|².
    pub calibrate: bool,
    pub repetitions: usize,
    /// Rabi evolution time [s]; also the coherence time of the Rabi bound.
    pub duration: f64,
    /// Rabi detection window [s].
    pub dt_window: f64,
    /// Rabi seed time [s].
    pub t0: f64,
}

impl Default for ProtocolSection {
    fn default() -> Self {
        Self {
            tau: 0.01,
            t_meas: 0.01,
            t_cycle: 1.0,
            shot_noise: false,
            readout: RamseyReadout::Law,
            readout_axis: Axis::Y,
            interrogation: Interrogation::Phase,
            calibrate: false,
            repetitions: 1,
            duration: 2e-5,
            dt_window: 2e-7,
            t0: 0.0,
        }
    }
}

impl ProtocolSection {
    pub fn ramsey(&self, model: &PhysicalParams) -> RamseyConfig {
        RamseyConfig {
            tau: self.tau,
            t_meas: self.t_meas,
            t_cycle: self.t_cycle,
            b_true: model.b_parallel,
            shot_noise: self.shot_noise,
            readout: self.readout,
            readout_axis: self.readout_axis,
            interrogation: self.interrogation,
        }
    }

    pub fn rabi(&self, model: &PhysicalParams) -> RabiConfig {
        RabiConfig {
            duration: self.duration,
            dt_window: self.dt_window,
            b_true: model.b_perp,
            shot_noise: self.shot_noise,
            t0: self.t0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    /// A model field name, or `omega` for the Rabi frequency in recoil units
    /// (sets B⊥ and the resonant ac frequency).
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            format: Format::Csv,
        }
    }
}

/// Sets one model field by name. `omega` is the Rabi frequency (recoil
/// units) on resonance.
pub fn set_param(params: &PhysicalParams, name: &str, value: f64) -> Result<PhysicalParams, String> {
    if name == "omega" {
        return Ok(params.with_rabi_frequency(value).with_rabi_resonance());
    }
    let mut v = serde_json::to_value(params).map_err(|e| e.to_string())?;
    let map = v.as_object_mut().ok_or("model is not a table")?;
    if !map.contains_key(name) {
        return Err(format!("unknown scan parameter `{name}`"));
    }
    map.insert(name.to_string(), serde_json::json!(value));
    serde_json::from_value(v).map_err(|e| format!("cannot set `{name}` = {value}: {e}"))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(vec![e.to_string()]))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration always serializes")
    }

    /// Every violated constraint, not just the first.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut errs = Vec::new();
        let mut push = |e: cavmag::Error| match e {
            cavmag::Error::InvalidConfig(v) => errs.extend(v),
            other => errs.push(other.to_string()),
        };
        if let Err(e) = self.model.validate() {
            push(e);
        }
        if let Err(e) = make_grid(self.grid.periods, self.grid.points) {
            push(e);
        }
        if let Err(e) = self.step.step_config(&self.model).validate(&self.model) {
            push(e);
        }
        if let Err(e) = self.protocol.ramsey(&self.model).validate() {
            push(e);
        }
        if !(self.step.t_final >= 0.0 && self.step.t_final.is_finite()) {
            errs.push(format!("step.t_final must be finite and >= 0 (got {})", self.step.t_final));
        }
        if self.noise.trajectories == 0 {
            errs.push("noise.trajectories must be >= 1".into());
        }
        if self.protocol.repetitions == 0 {
            errs.push("protocol.repetitions must be >= 1".into());
        }
        if self.seed > i64::MAX as u64 {
            errs.push(format!("seed must not exceed {}", i64::MAX));
        }
        if let Some(scan) = &self.scan {
            if scan.values.is_empty() {
                errs.push("scan.values must not be empty".into());
            }
            if scan.values.iter().any(|v| !v.is_finite()) {
                errs.push("scan.values must be finite".into());
            }
            if let Err(e) = set_param(&self.model, &scan.param, 0.0) {
                errs.push(e);
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(errs))
        }
    }

    pub fn grid(&self) -> Result<Arc<Grid>, CliError> {
        Ok(Arc::new(make_grid(self.grid.periods, self.grid.points)?))
    }

    /// Initial state from the grid section for the given parameters.
    pub fn initial_state(&self, params: &PhysicalParams) -> Result<SystemState, CliError> {
        let g = &self.grid;
        let seed = spin_coherent_state(params, self.grid()?, g.seed_amplitude, g.theta, g.phi)?;
        let mut state = if g.relax {
            relax_ordered(&seed, params, &self.step.relax_config())?
        } else {
            seed
        };
        if g.cavity == CavityStart::Empty {
            state.alpha1 = Default::default();
            state.alpha2 = Default::default();
        }
        state.time = 0.0;
        Ok(state)
    }

    pub fn noise_config(&self) -> NoiseConfig {
        NoiseConfig::new(self.model.epsilon, self.seed).with_kind(self.noise.kind)
    }
}
