//! The command surface: loading inputs, running detection and repair,
//! scoring against ground truth, injecting errors and sweeping parameters.
//! The `osr` binary is a thin argument parser over these functions.

mod config;
mod evaluate;
mod inject;
mod sweep;

pub use config::{parse_g, parse_pool, RunConfig};
pub use evaluate::{evaluate, format_truth, parse_truth, score, EvalReport};
pub use inject::{inject, outlier_value, parse_kinds, ErrorKind, Injection};
pub use sweep::{run_sweep, write_sweep_csv, SweepAxis, SweepRow};

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constraints::{detect_conflicts, parse_dc_file, DenialConstraint};
use crate::error::{Error, Result};
use crate::relation::{load_csv, parse_schema_hint, Instance, LoadOptions};
use crate::repair::{prepare, run_method, Diagnostics, Method, Prepared, SolverLimits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONSTRAINT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DcSyntax { .. } | Error::UnknownAttribute(_) | Error::OrderOnCategorical { .. } => EXIT_CONSTRAINT,
        Error::IterationLimit(_)
        | Error::NodeLimit(_)
        | Error::Infeasible
        | Error::Unbounded
        | Error::Solver(_)
        | Error::OracleLimit { .. }
        | Error::NoCleanTuples
        | Error::PoolTooSmall { .. } => EXIT_SOLVER,
        _ => EXIT_FAILURE,
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_instance(data: &Path, types: Option<&Path>, fill_missing: bool) -> Result<Instance> {
    let schema_hint = match types {
        Some(p) => Some(parse_schema_hint(&read_text(p)?)?),
        None => None,
    };
    load_csv(
        data,
        &LoadOptions {
            schema_hint,
            fill_missing_with_mode: fill_missing,
        },
    )
}

pub fn load_constraints(path: &Path, inst: &Instance) -> Result<Vec<DenialConstraint>> {
    parse_dc_file(&read_text(path)?, inst.schema())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectReport {
    pub tuples: usize,
    pub conflict_tuples: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub max_degree: usize,
}

pub fn cmd_detect(inst: &Instance, dcs: &[DenialConstraint]) -> DetectReport {
    let g = detect_conflicts(inst, dcs);
    DetectReport {
        tuples: inst.len(),
        conflict_tuples: g.conflict_set().to_vec(),
        edges: g.edges().to_vec(),
        max_degree: g.max_degree(),
    }
}

/// Output of a repair run. Field order is fixed; wall time is only present
/// when requested so that reports stay byte-identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepairReport {
    pub method: Method,
    pub removed: Vec<usize>,
    pub objective: f64,
    pub tuples: usize,
    pub conflict_tuples: usize,
    pub conflict_edges: usize,
    pub max_degree: usize,
    pub eta: f64,
    pub g: f64,
    pub config: RunConfig,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RepairReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// The fields of a report that evaluation needs.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReportSummary {
    pub removed: Vec<usize>,
    pub objective: f64,
    pub tuples: usize,
}

pub fn parse_report(text: &str) -> Result<ReportSummary> {
    serde_json::from_str(text).map_err(|e| Error::Report(e.to_string()))
}

/// Runs a full repair: conflict detection, loss table, solver.
pub fn cmd_repair(
    inst: &Instance,
    dcs: &[DenialConstraint],
    config: &RunConfig,
    limits: SolverLimits,
    timing: bool,
) -> Result<(RepairReport, Prepared)> {
    config.validate()?;
    let started = Instant::now();
    let prep = prepare(inst, dcs, &config.loss_params())?;
    let result = run_method(&prep, config.method, &config.repair_params(limits))?;
    let elapsed = started.elapsed().as_secs_f64() * 1e3;
    let report = RepairReport {
        method: result.method,
        removed: result.removed,
        objective: result.objective,
        tuples: inst.len(),
        conflict_tuples: prep.graph.conflict_set().len(),
        conflict_edges: prep.graph.edges().len(),
        max_degree: prep.graph.max_degree(),
        eta: prep.table.weights().eta(),
        g: prep.table.g(),
        config: config.clone(),
        diagnostics: result.diagnostics,
        wall_time_ms: timing.then_some(elapsed),
    };
    Ok((report, prep))
}

/// Scores a report against a truth file.
pub fn cmd_evaluate(report_text: &str, truth_text: &str) -> Result<EvalReport> {
    let r = parse_report(report_text)?;
    evaluate(&r.removed, r.objective, &parse_truth(truth_text)?, r.tuples)
}
