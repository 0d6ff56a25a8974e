//! Machine-readable command reports.

use entmono_core::{Ensemble, SolverConfig, SolverResult};
use serde::Serialize;
use serde_json::{json, Value};

use crate::statefile::pairs;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub monotone: String,
    pub restarts: usize,
    pub cardinality: Option<usize>,
    pub max_iters: usize,
    pub objective_tol: f64,
    pub stall_iters: usize,
    pub step_scale: f64,
    pub gap_tolerance: f64,
}

impl ConfigEcho {
    pub fn new(monotone: &str, cfg: &SolverConfig) -> Self {
        Self {
            monotone: monotone.to_string(),
            restarts: cfg.restarts,
            cardinality: cfg.cardinality,
            max_iters: cfg.max_iters,
            objective_tol: cfg.objective_tol,
            stall_iters: cfg.stall_iters,
            step_scale: cfg.step_scale,
            gap_tolerance: cfg.gap_tolerance,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    pub input: Option<InputDigest>,
    pub seed: Option<u64>,
    pub config: Option<ConfigEcho>,
    pub results: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, results: Value) -> Self {
        Self {
            command: command.to_string(),
            args: Vec::new(),
            input: None,
            seed: None,
            config: None,
            results,
            checks: Vec::new(),
            passed: true,
            wall_time_ms: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
        self.passed &= passed;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn ensemble_json(e: &Ensemble) -> Value {
    let members: Vec<Value> = e
        .iter()
        .map(|(p, s)| json!({ "weight": p, "amplitudes": pairs(s.amplitudes().iter().copied()) }))
        .collect();
    json!(members)
}

pub fn solver_json(r: &SolverResult) -> Value {
    json!({
        "mode": r.mode.as_str(),
        "value": r.value,
        "witness_vector": r.witness_vector.entries(),
        "witness_ensemble": ensemble_json(&r.witness_ensemble),
        "restarts": r.restarts,
        "restarts_within_tol": r.restarts_within_tol,
        "converged": r.converged,
        "iterations": r.iterations,
    })
}
