use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use super::{cmd_repair, evaluate, RunConfig};
use crate::constraints::DenialConstraint;
use crate::error::{Error, Result};
use crate::relation::Instance;
use crate::repair::SolverLimits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Gamma,
    Kappa,
    K,
    M,
    Model,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Gamma => "gamma",
            SweepAxis::Kappa => "kappa",
            SweepAxis::K => "k",
            SweepAxis::M => "m",
            SweepAxis::Model => "model",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gamma" => Ok(SweepAxis::Gamma),
            "kappa" => Ok(SweepAxis::Kappa),
            "k" => Ok(SweepAxis::K),
            "m" => Ok(SweepAxis::M),
            "model" | "model_kind" => Ok(SweepAxis::Model),
            other => Err(Error::Config(format!("unknown sweep axis `{other}`"))),
        }
    }
}

impl SweepAxis {
    /// `base` with this axis set to `value`.
    pub fn apply(self, base: &RunConfig, value: &str) -> Result<RunConfig> {
        let mut c = base.clone();
        let bad = |what: &str| Error::Config(format!("sweep value `{value}` is not a valid {what}"));
        match self {
            SweepAxis::Gamma => c.gamma = value.trim().parse().map_err(|_| bad("gamma"))?,
            SweepAxis::Kappa => c.kappa = value.trim().parse().map_err(|_| bad("kappa"))?,
            SweepAxis::K => c.k = value.trim().parse().map_err(|_| bad("k"))?,
            SweepAxis::M => c.m = super::parse_pool(value)?,
            SweepAxis::Model => c.model = value.parse()?,
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: String,
    pub method: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub objective: f64,
    pub removed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

/// One repair and evaluation per value.
pub fn run_sweep(
    inst: &Instance,
    dcs: &[DenialConstraint],
    truth: &[usize],
    base: &RunConfig,
    axis: SweepAxis,
    values: &[String],
    limits: SolverLimits,
    timing: bool,
) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|v| {
            let cfg = axis.apply(base, v)?;
            let (report, _) = cmd_repair(inst, dcs, &cfg, limits, timing)?;
            let e = evaluate(&report.removed, report.objective, truth, inst.len())?;
            Ok(SweepRow {
                axis,
                value: v.trim().to_string(),
                method: cfg.method.to_string(),
                precision: e.precision,
                recall: e.recall,
                f1: e.f1,
                objective: report.objective,
                removed: report.removed.len(),
                wall_time_ms: report.wall_time_ms,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush().map_err(|e| Error::io("<sweep>", e))?;
    Ok(())
}
