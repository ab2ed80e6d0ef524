//! Time series of the collective amplitudes, analytic and atom-resolved.

use std::path::{Path, PathBuf};

use aqt_core::analytic::amplitudes_general;
use aqt_core::microsim::{build_microscopic, embed_collective, project_and_leakage, Propagator};
use aqt_core::model::validate_params;
use aqt_core::C64;
use serde::Serialize;

use crate::config::{effective, scenario_window, RunConfig, TimeGrid, TimeUnits};
use crate::error::CliError;
use crate::output::{csv_document, fmt_f64, header_block, to_json_text, write_file};

pub const COLUMNS: [&str; 12] = [
    "t",
    "tS_over_pi",
    "p0",
    "p1",
    "p2",
    "re_c0",
    "im_c0",
    "re_c1",
    "im_c1",
    "re_c2",
    "im_c2",
    "leakage",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub ts_over_pi: f64,
    pub c: [C64; 3],
    pub leakage: f64,
}

impl SeriesRow {
    pub fn probabilities(&self) -> [f64; 3] {
        self.c.map(|z| z.norm_sqr())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub rows: Vec<SeriesRow>,
}

impl TimeSeries {
    pub fn to_csv(&self, header: &str) -> String {
        let rows = self.rows.iter().map(|r| {
            let mut cells = vec![fmt_f64(r.t), fmt_f64(r.ts_over_pi)];
            cells.extend(r.probabilities().map(fmt_f64));
            for z in r.c {
                cells.push(fmt_f64(z.re));
                cells.push(fmt_f64(z.im));
            }
            cells.push(fmt_f64(r.leakage));
            cells
        });
        csv_document(header, &COLUMNS, rows)
    }

    /// Largest `|p0 + p1 + p2 + leakage − 1|` over rows.
    pub fn row_sum_defect(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.probabilities().iter().sum::<f64>() + r.leakage - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_deviation(&self, other: &TimeSeries) -> f64 {
        self.rows
            .iter()
            .zip(&other.rows)
            .flat_map(|(a, b)| (0..3).map(move |k| (a.c[k] - b.c[k]).norm()))
            .fold(0.0, f64::max)
    }

    pub fn max_probability(&self, k: usize) -> (f64, f64) {
        self.rows
            .iter()
            .map(|r| (r.ts_over_pi, r.probabilities()[k]))
            .fold((f64::NAN, f64::NEG_INFINITY), |best, x| {
                if x.1 > best.1 {
                    x
                } else {
                    best
                }
            })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSummary {
    pub scenario: String,
    pub seed: Option<u64>,
    pub analytic_available: bool,
    pub detuning: f64,
    pub s: Option<f64>,
    pub s0: Option<f64>,
    pub scenario_duration: Option<f64>,
    pub points: usize,
    pub max_deviation: Option<f64>,
    pub max_leakage: f64,
    pub max_row_sum_defect: f64,
    pub p0_peak: [f64; 2],
    pub p2_peak: [f64; 2],
    pub config: serde_json::Value,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub analytic: Option<TimeSeries>,
    pub numeric: TimeSeries,
    pub summary: SimulationSummary,
}

fn default_grid() -> TimeGrid {
    TimeGrid {
        t_max: 4.0,
        points: 401,
        units: TimeUnits::SOverPi,
    }
}

pub fn simulate(cfg: &RunConfig) -> Result<Simulation, CliError> {
    let params = cfg.system.params()?;
    let grid = cfg.time.clone().unwrap_or_else(default_grid);
    let eligible = validate_params(&params).analytic_eligible();

    let (params, model, duration) = if eligible {
        let base = effective(&params)?;
        let (detuning, duration) = scenario_window(&cfg.scenario, &base)?;
        let retuned = params.with_detuning(detuning);
        (retuned.clone(), Some(effective(&retuned)?), Some(duration))
    } else {
        if grid.units == TimeUnits::SOverPi {
            return Err(CliError::invalid(
                "time.units",
                "s-over-pi needs symmetric parameters; use absolute times",
            ));
        }
        (params, None, None)
    };

    let s = model.as_ref().map(|m| m.s);
    let samples = grid.samples(s.unwrap_or(f64::NAN));
    let e0 = params.vacuum_energy();
    let h = build_microscopic(&params)?;
    let prop = Propagator::new(&h)?;
    let zero = C64::new(0.0, 0.0);
    let psi0 = embed_collective(&params, [zero, C64::new(1.0, 0.0), zero]);
    let mut numeric = Vec::with_capacity(samples.len());
    for &(t, ts_over_pi) in &samples {
        let proj = project_and_leakage(&prop.evolve(&psi0, t)?, &params)?;
        let phase = C64::from_polar(1.0, -e0 * t);
        numeric.push(SeriesRow {
            t,
            ts_over_pi,
            c: [proj.c0 * phase, proj.c1 * phase, proj.c2 * phase],
            leakage: proj.leakage,
        });
    }
    let numeric = TimeSeries { rows: numeric };

    let analytic = model.as_ref().map(|m| TimeSeries {
        rows: samples
            .iter()
            .map(|&(t, ts_over_pi)| {
                let a = amplitudes_general(t, m);
                SeriesRow {
                    t,
                    ts_over_pi,
                    c: [a.c0, a.c1, a.c2],
                    leakage: 0.0,
                }
            })
            .collect(),
    });

    let reference = analytic.as_ref().unwrap_or(&numeric);
    let (p0_at, p0_max) = reference.max_probability(0);
    let (p2_at, p2_max) = reference.max_probability(2);
    let summary = SimulationSummary {
        scenario: cfg.scenario.name().to_string(),
        seed: cfg.seed(),
        analytic_available: analytic.is_some(),
        detuning: model
            .as_ref()
            .map_or(params.collective_detuning(), |m| m.detuning),
        s,
        s0: model.as_ref().map(|m| m.s0),
        scenario_duration: duration,
        points: samples.len(),
        max_deviation: analytic.as_ref().map(|a| a.max_deviation(&numeric)),
        max_leakage: numeric
            .rows
            .iter()
            .map(|r| r.leakage.abs())
            .fold(0.0, f64::max),
        max_row_sum_defect: reference.row_sum_defect().max(numeric.row_sum_defect()),
        p0_peak: [p0_at, p0_max],
        p2_peak: [p2_at, p2_max],
        config: serde_json::to_value(cfg).expect("config serializes"),
    };
    Ok(Simulation {
        analytic,
        numeric,
        summary,
    })
}

impl Simulation {
    pub fn analytic_csv(&self, cfg: &RunConfig) -> Option<String> {
        self.analytic.as_ref().map(|a| {
            a.to_csv(&header_block(
                "simulate",
                cfg,
                &[("series", "analytic".into())],
            ))
        })
    }

    pub fn numeric_csv(&self, cfg: &RunConfig) -> String {
        self.numeric.to_csv(&header_block(
            "simulate",
            cfg,
            &[("series", "numeric".into())],
        ))
    }
}

/// Writes `analytic.csv` (symmetric parameters only), `numeric.csv` and `summary.json`.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path) -> Result<(Simulation, Vec<PathBuf>), CliError> {
    let sim = simulate(cfg)?;
    let mut written = Vec::new();
    if let Some(csv) = sim.analytic_csv(cfg) {
        written.push(write_file(out, "analytic.csv", &csv)?);
    }
    written.push(write_file(out, "numeric.csv", &sim.numeric_csv(cfg))?);
    written.push(write_file(
        out,
        "summary.json",
        &to_json_text(&sim.summary),
    )?);
    Ok((sim, written))
}
