//! Parameter sweeps of a scalar metric.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use aqt_core::analytic::{max_probability, Regime};
use aqt_core::microsim::{build_microscopic, embed_collective, project_and_leakage, Propagator};
use aqt_core::model::collective_hamiltonian;
use aqt_core::protocol::{entanglement_entropy, run_control_swap, QubitState, Subsystem};
use aqt_core::C64;
use rayon::prelude::*;

use crate::config::{effective, Metric, RunConfig, Scenario, SweepConfig, SweepParam};
use crate::error::CliError;
use crate::output::{csv_document, fmt_f64, header_block, write_file};

const LEAKAGE_SAMPLES: usize = 200;

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::DetuningOverS => "detuning_over_s",
            SweepParam::AlphaCSq => "alpha_c_sq",
            SweepParam::Beta1Sq => "beta1_sq",
            SweepParam::N => "n",
        }
    }

    fn applies_to(self, metric: Metric) -> bool {
        match metric {
            Metric::MaxTransfer | Metric::Leakage => {
                matches!(self, SweepParam::DetuningOverS | SweepParam::N)
            }
            Metric::Me3Entropy => matches!(
                self,
                SweepParam::AlphaCSq | SweepParam::Beta1Sq | SweepParam::N
            ),
        }
    }
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::MaxTransfer => "max_transfer",
            Metric::Me3Entropy => "me3_entropy",
            Metric::Leakage => "leakage",
        }
    }
}

/// One grid point; unset coordinates fall back to the base configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SweepPoint {
    pub detuning_over_s: Option<f64>,
    pub alpha_c_sq: Option<f64>,
    pub beta1_sq: Option<f64>,
    pub n: Option<usize>,
}

impl SweepPoint {
    fn set(&mut self, p: SweepParam, x: f64) -> Result<(), CliError> {
        let unit = |name: &str, x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(x)
            } else {
                Err(CliError::invalid(name, format!("{x} outside [0, 1]")))
            }
        };
        match p {
            SweepParam::DetuningOverS => {
                if !(0.0..1.0).contains(&x) {
                    return Err(CliError::invalid(
                        "sweep.detuning_over_s",
                        format!("{x} outside [0, 1)"),
                    ));
                }
                self.detuning_over_s = Some(x);
            }
            SweepParam::AlphaCSq => self.alpha_c_sq = Some(unit("sweep.alpha_c_sq", x)?),
            SweepParam::Beta1Sq => self.beta1_sq = Some(unit("sweep.beta1_sq", x)?),
            SweepParam::N => {
                if x < 1.0 || x.fract() != 0.0 {
                    return Err(CliError::invalid(
                        "sweep.n",
                        format!("{x} is not a positive integer"),
                    ));
                }
                self.n = Some(x as usize);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub params: Vec<SweepParam>,
    pub metric: Metric,
    /// Axis coordinates and metric value, in grid order (first axis slowest).
    pub rows: Vec<(Vec<f64>, f64)>,
}

impl SweepTable {
    pub fn to_csv(&self, header: &str) -> String {
        let mut cols: Vec<&str> = self.params.iter().map(|p| p.name()).collect();
        cols.push(self.metric.name());
        let rows = self.rows.iter().map(|(xs, v)| {
            let mut cells: Vec<String> = xs.iter().map(|&x| fmt_f64(x)).collect();
            cells.push(fmt_f64(*v));
            cells
        });
        csv_document(header, &cols, rows)
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|(_, v)| *v).collect()
    }
}

fn evaluate(cfg: &RunConfig, metric: Metric, p: &SweepPoint) -> Result<f64, CliError> {
    let params = cfg.system.params_with_size(p.n)?;
    match metric {
        Metric::MaxTransfer => {
            let base = effective(&params)?;
            let x = p.detuning_over_s.unwrap_or(0.0);
            let m = base.with_detuning(x * base.s0 / (1.0 - x * x).sqrt());
            Ok(max_probability(2, (0.0, 2.0 * PI / m.s), &m).1)
        }
        Metric::Me3Entropy => {
            let model = effective(&params)?;
            let base = cfg.qubits().ok();
            let me1 = match (p.beta1_sq, base) {
                (Some(b), _) => QubitState::from_population(b, 0.0),
                (None, Some((q, _))) => q,
                (None, None) => QubitState::excited(),
            };
            let control = match (p.alpha_c_sq, base) {
                (Some(a), _) => QubitState::from_population(1.0 - a, 0.0),
                (None, Some((_, q))) => q,
                (None, None) => QubitState::from_population(0.5, 0.0),
            };
            let regime = match cfg.scenario {
                Scenario::ControlSwap { regime } => Regime::from(regime),
                _ => Regime::Resonant,
            };
            let trace = run_control_swap(&me1, &control, &model, regime)?;
            Ok(entanglement_entropy(trace.final_state(), &[Subsystem::Me3]))
        }
        Metric::Leakage => {
            let params = match p.detuning_over_s {
                Some(x) => {
                    let base = effective(&params)?;
                    params.with_detuning(x * base.s0 / (1.0 - x * x).sqrt())
                }
                None => params,
            };
            let h3 = collective_hamiltonian(&params)?;
            let span = h3.symmetric_eigenvalues();
            let spread = span.max() - span.min();
            let horizon = 4.0 * PI / spread.max(1e-12);
            let prop = Propagator::new(&build_microscopic(&params)?)?;
            let zero = C64::new(0.0, 0.0);
            let psi0 = embed_collective(&params, [zero, C64::new(1.0, 0.0), zero]);
            let mut worst: f64 = 0.0;
            for k in 0..=LEAKAGE_SAMPLES {
                let t = horizon * k as f64 / LEAKAGE_SAMPLES as f64;
                let proj = project_and_leakage(&prop.evolve(&psi0, t)?, &params)?;
                worst = worst.max(proj.leakage.abs());
            }
            Ok(worst)
        }
    }
}

pub fn sweep(cfg: &RunConfig) -> Result<SweepTable, CliError> {
    let SweepConfig { metric, axes } = cfg
        .sweep
        .clone()
        .ok_or_else(|| CliError::invalid("sweep", "missing sweep section"))?;
    for a in &axes {
        if !a.param.applies_to(metric) {
            return Err(CliError::invalid(
                "sweep.axes.param",
                format!(
                    "{} does not affect metric {}",
                    a.param.name(),
                    metric.name()
                ),
            ));
        }
    }
    let grids = axes
        .iter()
        .map(|a| a.grid())
        .collect::<Result<Vec<_>, _>>()?;
    let mut coords: Vec<Vec<f64>> = vec![vec![]];
    for g in &grids {
        coords = coords
            .into_iter()
            .flat_map(|c| g.iter().map(move |&x| [c.clone(), vec![x]].concat()))
            .collect();
    }
    let points = coords
        .iter()
        .map(|xs| {
            let mut p = SweepPoint::default();
            for (a, &x) in axes.iter().zip(xs) {
                p.set(a.param, x)?;
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let values = points
        .par_iter()
        .map(|p| evaluate(cfg, metric, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepTable {
        params: axes.iter().map(|a| a.param).collect(),
        metric,
        rows: coords.into_iter().zip(values).collect(),
    })
}

/// Writes `sweep.csv`.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<(SweepTable, PathBuf), CliError> {
    let table = sweep(cfg)?;
    let csv = table.to_csv(&header_block(
        "sweep",
        cfg,
        &[("metric", table.metric.name().into())],
    ));
    Ok((table.clone(), write_file(out, "sweep.csv", &csv)?))
}
