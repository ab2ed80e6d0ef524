//! Protocol runs with state dumps, fidelity and entropies.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use aqt_core::analytic::{sqrt_swap_config, Regime};
use aqt_core::model::NodeLabel;
use aqt_core::protocol::{
    branch_phases, control_sqrt_swap_reference, control_swap_reference, entanglement_entropy,
    fidelity, init_register, sdma_state, ProtocolEngine, ProtocolStep, ProtocolTrace, QubitState,
    RegisterState, Subsystem,
};
use aqt_core::EffectiveModel64;
use serde::Serialize;

use crate::config::{effective, RunConfig, Scenario};
use crate::error::CliError;
use crate::output::{to_json_text, write_file};

const DUMP_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermDump {
    pub label: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateDump {
    pub step: String,
    pub norm: f64,
    pub terms: Vec<TermDump>,
}

impl StateDump {
    fn new(step: String, state: &RegisterState<f64>) -> Self {
        Self {
            step,
            norm: state.norm_sqr().sqrt(),
            terms: state
                .terms(DUMP_THRESHOLD)
                .into_iter()
                .map(|(l, z)| TermDump {
                    label: l.to_string(),
                    re: z.re,
                    im: z.im,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub me3_excited: bool,
    pub weight: f64,
    pub overlap: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entropies {
    pub gate: f64,
    pub me1: f64,
    pub me2: f64,
    pub me3: f64,
    pub me1_me2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Marginals {
    pub gate_excited: f64,
    pub gate_blockade: f64,
    pub me1: f64,
    pub me2: f64,
    pub me3: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolSummary {
    pub scenario: String,
    pub seed: Option<u64>,
    pub steps: usize,
    pub final_norm: f64,
    pub fidelity: Option<f64>,
    pub branches: Vec<BranchReport>,
    pub entropies: Entropies,
    pub marginals: Marginals,
    /// Initial-to-final change of each subsystem's excited population.
    pub max_marginal_change: f64,
    /// Largest population change of the prepared dark state over ten resonant swap times.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sdma_population_drift: Option<f64>,
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceFile {
    pub scenario: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub initial: StateDump,
    pub steps: Vec<StateDump>,
}

#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub trace: ProtocolTrace<f64>,
    pub reference: Option<RegisterState<f64>>,
    pub summary: ProtocolSummary,
}

fn entropies(s: &RegisterState<f64>) -> Entropies {
    Entropies {
        gate: entanglement_entropy(s, &[Subsystem::Gate]),
        me1: entanglement_entropy(s, &[Subsystem::Me1]),
        me2: entanglement_entropy(s, &[Subsystem::Me2]),
        me3: entanglement_entropy(s, &[Subsystem::Me3]),
        me1_me2: entanglement_entropy(s, &[Subsystem::Me1, Subsystem::Me2]),
    }
}

fn marginals(s: &RegisterState<f64>) -> Marginals {
    Marginals {
        gate_excited: s.marginal(Subsystem::Gate, 1),
        gate_blockade: s.marginal(Subsystem::Gate, 2),
        me1: s.marginal(Subsystem::Me1, 1),
        me2: s.marginal(Subsystem::Me2, 1),
        me3: s.marginal(Subsystem::Me3, 1),
    }
}

fn sdma_drift(
    model: &EffectiveModel64,
    engine: &ProtocolEngine<f64>,
    dark: &RegisterState<f64>,
) -> Result<f64, CliError> {
    let horizon = 10.0 * Regime::Resonant.swap_time(model);
    let p0 = dark.populations();
    let mut worst: f64 = 0.0;
    for k in 1..=200 {
        let s = engine.swap_evolve(dark, horizon * k as f64 / 200.0, model.detuning)?;
        for (a, b) in p0.iter().zip(s.populations()) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

pub fn run_protocol(cfg: &RunConfig) -> Result<ProtocolRun, CliError> {
    let model = effective(&cfg.system.params()?)?;
    let mut engine = ProtocolEngine::new(model.clone());
    if let Some(e) = cfg.system.blockade_energy {
        engine = engine.with_blockade_energy(e);
    }

    let mut drift = None;
    let (trace, reference) = match &cfg.scenario {
        Scenario::ControlSwap { regime } => {
            let (p1, pc) = cfg.qubits()?;
            let regime = Regime::from(*regime);
            let trace = engine.run(init_register(&p1, &pc), &engine.control_swap_steps(regime))?;
            (
                trace,
                Some(control_swap_reference(&p1, &pc, &model, regime)),
            )
        }
        Scenario::ControlSqrtSwap => {
            let (p1, pc) = cfg.qubits()?;
            let trace = engine.run(init_register(&p1, &pc), &engine.control_sqrt_swap_steps())?;
            (trace, Some(control_sqrt_swap_reference(&p1, &pc, &model)))
        }
        Scenario::Sdma => {
            let cfg = sqrt_swap_config(&model);
            let steps = [
                ProtocolStep::SwapEvolve {
                    duration: cfg.duration,
                    detuning: cfg.detuning,
                },
                ProtocolStep::StarkPhase {
                    node: NodeLabel::Me2,
                    angle: FRAC_PI_2,
                },
            ];
            let trace = engine.run(
                init_register(&QubitState::excited(), &QubitState::ground()),
                &steps,
            )?;
            drift = Some(sdma_drift(&model, &engine, trace.final_state())?);
            (trace, Some(sdma_state()))
        }
        Scenario::Custom { steps } => {
            let (p1, pc) = cfg.qubits()?;
            let steps: Vec<_> = steps.iter().map(|s| s.to_step()).collect();
            for s in &steps {
                if let ProtocolStep::SwapEvolve { duration, .. } = s {
                    if *duration < 0.0 {
                        return Err(CliError::invalid(
                            "scenario.steps.duration",
                            "negative duration",
                        ));
                    }
                }
            }
            (engine.run(init_register(&p1, &pc), &steps)?, None)
        }
        other => {
            return Err(CliError::invalid(
                "scenario.kind",
                format!("`{}` is not a protocol scenario", other.name()),
            ))
        }
    };

    let last = trace.final_state();
    let before = marginals(&trace.initial);
    let after = marginals(last);
    let max_marginal_change = [
        (before.me1 - after.me1).abs(),
        (before.me2 - after.me2).abs(),
        (before.me3 - after.me3).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let summary = ProtocolSummary {
        scenario: cfg.scenario.name().to_string(),
        seed: cfg.seed(),
        steps: trace.steps.len(),
        final_norm: last.norm_sqr().sqrt(),
        fidelity: reference.as_ref().map(|r| fidelity(last, r)),
        branches: reference
            .as_ref()
            .map(|r| {
                branch_phases(last, r)
                    .into_iter()
                    .map(|b| BranchReport {
                        me3_excited: b.me3_excited,
                        weight: b.weight,
                        overlap: b.overlap,
                        phase: b.phase,
                    })
                    .collect()
            })
            .unwrap_or_default(),
        entropies: entropies(last),
        marginals: after,
        max_marginal_change,
        sdma_population_drift: drift,
        config: serde_json::to_value(cfg).expect("config serializes"),
    };
    Ok(ProtocolRun {
        trace,
        reference,
        summary,
    })
}

impl ProtocolRun {
    pub fn trace_file(&self, cfg: &RunConfig) -> TraceFile {
        TraceFile {
            scenario: cfg.scenario.name().to_string(),
            seed: cfg.seed(),
            config: serde_json::to_value(cfg).expect("config serializes"),
            initial: StateDump::new("initial".into(), &self.trace.initial),
            steps: self
                .trace
                .steps
                .iter()
                .map(|(step, s)| StateDump::new(step.to_string(), s))
                .collect(),
        }
    }
}

/// Writes `trace.json` and `protocol_summary.json`.
pub fn cmd_protocol(cfg: &RunConfig, out: &Path) -> Result<(ProtocolRun, Vec<PathBuf>), CliError> {
    let run = run_protocol(cfg)?;
    let trace = write_file(out, "trace.json", &to_json_text(&run.trace_file(cfg)))?;
    let summary = write_file(out, "protocol_summary.json", &to_json_text(&run.summary))?;
    Ok((run, vec![trace, summary]))
}
