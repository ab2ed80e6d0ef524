//! JSON run configuration.

use std::path::{Path, PathBuf};

use aqt_core::analytic::{sqrt_swap_config, swap_theta_config, Regime};
use aqt_core::model::{derive_effective, AtomSite, NodeLabel, NodeSpec, SystemParams};
use aqt_core::protocol::{FramePhases, ProtocolStep, QubitState};
use aqt_core::{EffectiveModel64, SystemParams64, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub scenario: Scenario,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<QubitsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

/// Complex number as a bare real or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    pub fn value(self) -> C64 {
        match self {
            ComplexValue::Real(x) => C64::new(x, 0.0),
            ComplexValue::Pair([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Atoms in ME1; ignored for explicit couplings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n1: Option<usize>,
    /// Atoms in ME2; defaults to `n1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n2: Option<usize>,
    pub couplings: CouplingConfig,
    pub omega: f64,
    /// Bare gate frequency. Overridden by scenarios that fix the detuning.
    pub omega0: f64,
    pub delta1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta2: Option<f64>,
    pub delta0: f64,
    pub g_gate1: ComplexValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_gate2: Option<ComplexValue>,
    /// Energy of the gate blockade level; defaults to `ω̃₀` of the swap model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blockade_energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteConfig {
    pub g: ComplexValue,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CouplingConfig {
    Uniform {
        magnitude: f64,
    },
    Explicit {
        node1: Vec<SiteConfig>,
        node2: Vec<SiteConfig>,
    },
    Random {
        rms: f64,
        seed: u64,
        /// Rescale both nodes to `A = N·rms²`, keeping the analytic path usable.
        #[serde(default = "yes")]
        normalize: bool,
    },
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeConfig {
    Resonant,
    Nonresonant,
}

impl From<RegimeConfig> for Regime {
    fn from(r: RegimeConfig) -> Self {
        match r {
            RegimeConfig::Resonant => Regime::Resonant,
            RegimeConfig::Nonresonant => Regime::Nonresonant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Scenario {
    ResonantSwap,
    NonresonantSwap,
    SwapTheta {
        n: i64,
        m: i64,
    },
    ControlSwap {
        #[serde(default = "resonant")]
        regime: RegimeConfig,
    },
    ControlSqrtSwap,
    Sdma,
    Custom {
        steps: Vec<StepConfig>,
    },
}

fn resonant() -> RegimeConfig {
    RegimeConfig::Resonant
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::ResonantSwap => "resonant-swap",
            Scenario::NonresonantSwap => "nonresonant-swap",
            Scenario::SwapTheta { .. } => "swap-theta",
            Scenario::ControlSwap { .. } => "control-swap",
            Scenario::ControlSqrtSwap => "control-sqrt-swap",
            Scenario::Sdma => "sdma",
            Scenario::Custom { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum NodeConfig {
    Me1,
    Me2,
    Me3,
}

impl From<NodeConfig> for NodeLabel {
    fn from(n: NodeConfig) -> Self {
        match n {
            NodeConfig::Me1 => NodeLabel::Me1,
            NodeConfig::Me2 => NodeLabel::Me2,
            NodeConfig::Me3 => NodeLabel::Me3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StepConfig {
    TransferGateMe3,
    #[serde(rename = "pi-pulse-1b")]
    PiPulse1b,
    SwapEvolve {
        duration: f64,
        detuning: f64,
    },
    StarkPhase {
        node: NodeConfig,
        angle: f64,
    },
    FrameCorrection {
        #[serde(default)]
        me1: f64,
        #[serde(default)]
        me2: f64,
        #[serde(default)]
        me3: f64,
    },
}

impl StepConfig {
    pub fn to_step(&self) -> ProtocolStep<f64> {
        match *self {
            StepConfig::TransferGateMe3 => ProtocolStep::TransferGateMe3,
            StepConfig::PiPulse1b => ProtocolStep::PiPulse1b,
            StepConfig::SwapEvolve { duration, detuning } => {
                ProtocolStep::SwapEvolve { duration, detuning }
            }
            StepConfig::StarkPhase { node, angle } => ProtocolStep::StarkPhase {
                node: node.into(),
                angle,
            },
            StepConfig::FrameCorrection { me1, me2, me3 } => {
                ProtocolStep::FrameCorrection(FramePhases { me1, me2, me3 })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeUnits {
    #[default]
    Absolute,
    /// `t·S/π` with `S` of the scenario model.
    SOverPi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub units: TimeUnits,
}

impl TimeGrid {
    /// Evenly spaced `(t, tS/π)` pairs from 0 to `t_max` inclusive. On an
    /// `s-over-pi` grid the second coordinate is exact.
    pub fn samples(&self, s: f64) -> Vec<(f64, f64)> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                let x = self.t_max * k as f64 / last;
                match self.units {
                    TimeUnits::Absolute => (x, x * s / std::f64::consts::PI),
                    TimeUnits::SOverPi => (x * std::f64::consts::PI / s, x),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitAmplitudes {
    pub alpha: ComplexValue,
    pub beta: ComplexValue,
    #[serde(default)]
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitPopulation {
    pub p_excited: f64,
    #[serde(default)]
    pub phi: f64,
}

/// `α|0⟩ + β e^{iφ}|1⟩`, either by amplitudes or by excited population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QubitConfig {
    Amplitudes(QubitAmplitudes),
    Population(QubitPopulation),
}

impl QubitConfig {
    pub fn resolve(&self, field: &str) -> Result<QubitState<f64>, CliError> {
        match *self {
            QubitConfig::Amplitudes(QubitAmplitudes { alpha, beta, phi }) => {
                QubitState::new(alpha.value(), beta.value(), phi)
                    .map_err(|e| CliError::invalid(field, e.to_string()))
            }
            QubitConfig::Population(QubitPopulation { p_excited, phi }) => {
                if !(0.0..=1.0).contains(&p_excited) {
                    return Err(CliError::invalid(
                        field,
                        format!("p_excited {p_excited} outside [0, 1]"),
                    ));
                }
                Ok(QubitState::from_population(p_excited, phi))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitsConfig {
    pub me1: QubitConfig,
    pub control: QubitConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Peak `|c₂|²` over `[0, 2π/S]`.
    MaxTransfer,
    /// ME3 entropy after control-SWAP.
    Me3Entropy,
    /// Peak leakage of the atom-resolved model along `[0, 4π/S]`.
    Leakage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// `Δ/S` in `[0, 1)`.
    DetuningOverS,
    AlphaCSq,
    Beta1Sq,
    N,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: SweepParam,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

impl Axis {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        if let Some(v) = &self.values {
            if v.is_empty() {
                return Err(CliError::invalid("sweep.axes.values", "empty value list"));
            }
            return Ok(v.clone());
        }
        match (self.start, self.stop, self.points) {
            (Some(a), Some(b), Some(n)) if n >= 2 => Ok((0..n)
                .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
                .collect()),
            (Some(a), Some(_), Some(1)) => Ok(vec![a]),
            _ => Err(CliError::invalid(
                "sweep.axes",
                "give either values or start/stop/points",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub metric: Metric,
    pub axes: Vec<Axis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::invalid("config", e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    fn check(&self) -> Result<(), CliError> {
        if let Some(t) = &self.time {
            if t.points < 2 {
                return Err(CliError::invalid(
                    "time.points",
                    "time grid needs at least 2 points",
                ));
            }
            if !(t.t_max.is_finite() && t.t_max > 0.0) {
                return Err(CliError::invalid(
                    "time.t_max",
                    "must be positive and finite",
                ));
            }
        }
        if let Some(s) = &self.sweep {
            if s.axes.is_empty() || s.axes.len() > 2 {
                return Err(CliError::invalid("sweep.axes", "one or two axes required"));
            }
        }
        Ok(())
    }

    /// Coupling seed, if any; recorded in every output.
    pub fn seed(&self) -> Option<u64> {
        match self.system.couplings {
            CouplingConfig::Random { seed, .. } => Some(seed),
            _ => None,
        }
    }

    pub fn output_dir(&self, cli: Option<&Path>) -> PathBuf {
        cli.map(Path::to_path_buf)
            .or_else(|| self.output.as_ref().map(|o| o.dir.clone()))
            .unwrap_or_else(|| PathBuf::from("aqt-out"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn qubits(&self) -> Result<(QubitState<f64>, QubitState<f64>), CliError> {
        let q = self
            .qubits
            .as_ref()
            .ok_or_else(|| CliError::invalid("qubits", "required by this scenario"))?;
        Ok((
            q.me1.resolve("qubits.me1")?,
            q.control.resolve("qubits.control")?,
        ))
    }
}

impl SystemConfig {
    /// Parameters with `n1` replaced by `n` on both nodes (uniform or random couplings).
    pub fn params_with_size(&self, n: Option<usize>) -> Result<SystemParams64, CliError> {
        let n1 = n.or(self.n1);
        let n2 = n.or(self.n2).or(n1);
        let (node1, node2) = match &self.couplings {
            CouplingConfig::Uniform { magnitude } => {
                let (n1, n2) = sizes(n1, n2)?;
                (
                    NodeSpec::uniform(NodeLabel::Me1, n1, *magnitude),
                    NodeSpec::uniform(NodeLabel::Me2, n2, *magnitude),
                )
            }
            CouplingConfig::Explicit { node1, node2 } => {
                let sites = |v: &[SiteConfig]| {
                    v.iter()
                        .map(|s| AtomSite::new(s.g.value(), s.phase))
                        .collect()
                };
                (
                    NodeSpec::new(NodeLabel::Me1, sites(node1)),
                    NodeSpec::new(NodeLabel::Me2, sites(node2)),
                )
            }
            CouplingConfig::Random {
                rms,
                seed,
                normalize,
            } => {
                let (n1, n2) = sizes(n1, n2)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let a = NodeSpec::random(NodeLabel::Me1, n1, *rms, &mut rng);
                let b = NodeSpec::random(NodeLabel::Me2, n2, *rms, &mut rng);
                if *normalize {
                    (
                        a.normalized_to(n1 as f64 * rms * rms),
                        b.normalized_to(n2 as f64 * rms * rms),
                    )
                } else {
                    (a, b)
                }
            }
        };
        let params = SystemParams {
            node1,
            node2,
            omega: self.omega,
            omega0: self.omega0,
            delta1: self.delta1,
            delta2: self.delta2.unwrap_or(self.delta1),
            delta0: self.delta0,
            g_gate1: self.g_gate1.value(),
            g_gate2: self.g_gate2.unwrap_or(self.g_gate1).value(),
        };
        aqt_core::model::validate_params(&params)
            .check_valid()
            .map_err(|e| CliError::invalid("system", e.to_string()))?;
        Ok(params)
    }

    pub fn params(&self) -> Result<SystemParams64, CliError> {
        self.params_with_size(None)
    }
}

fn sizes(n1: Option<usize>, n2: Option<usize>) -> Result<(usize, usize), CliError> {
    let n1 = n1.ok_or_else(|| {
        CliError::invalid("system.n1", "required for uniform and random couplings")
    })?;
    Ok((n1, n2.unwrap_or(n1)))
}

/// Collective model; fails when the parameters are not symmetric.
pub fn effective(params: &SystemParams64) -> Result<EffectiveModel64, CliError> {
    derive_effective(params).map_err(|e| CliError::invalid("system", e.to_string()))
}

/// Detuning and natural duration of a time-series scenario.
pub fn scenario_window(
    scenario: &Scenario,
    model: &EffectiveModel64,
) -> Result<(f64, f64), CliError> {
    match *scenario {
        Scenario::ResonantSwap => Ok((0.0, Regime::Resonant.swap_time(model))),
        Scenario::NonresonantSwap => {
            let cfg = sqrt_swap_config(model);
            Ok((cfg.detuning, cfg.duration))
        }
        Scenario::SwapTheta { n, m } => {
            let cfg = swap_theta_config(n, m, model)
                .map_err(|e| CliError::invalid("scenario", e.to_string()))?;
            Ok((cfg.detuning, cfg.duration))
        }
        _ => Err(CliError::invalid(
            "scenario.kind",
            format!("`{}` is not a time-series scenario", scenario.name()),
        )),
    }
}
