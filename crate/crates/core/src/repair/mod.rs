//! Removal-set solvers: exact ILP, clique-tightened LP rounding, randomized
//! edge sampling, and a brute-force oracle for small conflict sets.
//!
//! Every solver has two entry points: one taking a raw instance and
//! constraints, and a `*_with` variant working on a prebuilt conflict graph
//! and [`ProviderWeights`], which is what the tests drive directly.

mod clique;
mod exact;
mod oracle;
mod prob;

pub use clique::clique_repair_with;
pub use exact::exact_repair_with;
pub use oracle::{brute_force_oracle_with, DEFAULT_ORACLE_LIMIT};
pub use prob::{keep_probability, probabilistic_repair_with};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constraints::{detect_conflicts, ConflictGraph, DenialConstraint};
use crate::depmodel::{build_loss_table, LossParams, LossTable, ProviderWeights};
use crate::error::{Error, Result};
use crate::optim::{Engine, IlpOptions, LpOptions, SimplexOptions, SolutionClass};
use crate::relation::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    #[default]
    Clique,
    #[serde(alias = "prob")]
    Probabilistic,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Exact, Method::Clique, Method::Probabilistic, Method::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Clique => "clique",
            Method::Probabilistic => "probabilistic",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" | "ilp" => Ok(Method::Exact),
            "clique" => Ok(Method::Clique),
            "prob" | "probabilistic" => Ok(Method::Probabilistic),
            "oracle" | "brute-force" => Ok(Method::Oracle),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    pub lp_max_iterations: usize,
    pub ilp_max_nodes: usize,
    pub engine: Engine,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            lp_max_iterations: SimplexOptions::default().max_iterations,
            ilp_max_nodes: IlpOptions::default().max_nodes,
            engine: Engine::Auto,
        }
    }
}

pub const LP_MAX_ITER_ENV: &str = "OSR_LP_MAX_ITER";
pub const ILP_MAX_NODES_ENV: &str = "OSR_ILP_MAX_NODES";

impl SolverLimits {
    /// Defaults overridden by `OSR_LP_MAX_ITER` and `OSR_ILP_MAX_NODES`.
    pub fn from_env() -> Result<Self> {
        let mut limits = SolverLimits::default();
        let read = |name: &str| -> Result<Option<usize>> {
            match std::env::var(name) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map(Some)
                    .map_err(|_| Error::Config(format!("{name} must be a non-negative integer, got `{v}`"))),
                Err(_) => Ok(None),
            }
        };
        if let Some(v) = read(LP_MAX_ITER_ENV)? {
            limits.lp_max_iterations = v;
        }
        if let Some(v) = read(ILP_MAX_NODES_ENV)? {
            limits.ilp_max_nodes = v;
        }
        Ok(limits)
    }

    pub(crate) fn lp(&self) -> LpOptions {
        LpOptions {
            engine: self.engine,
            simplex: SimplexOptions {
                max_iterations: self.lp_max_iterations,
                ..SimplexOptions::default()
            },
        }
    }

    pub(crate) fn ilp(&self) -> IlpOptions {
        IlpOptions {
            lp: self.lp(),
            max_nodes: self.ilp_max_nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepairParams {
    pub loss: LossParams,
    /// Tolerance for reading `x_i = 0.5`.
    pub epsilon: f64,
    pub seed: u64,
    pub limits: SolverLimits,
    pub oracle_limit: usize,
}

impl Default for RepairParams {
    fn default() -> Self {
        RepairParams {
            loss: LossParams::default(),
            epsilon: 1e-6,
            seed: 0,
            limits: SolverLimits::default(),
            oracle_limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Outer loop rounds (clique), branch-and-bound LPs (exact) or edges
    /// sampled (probabilistic).
    pub iterations: usize,
    pub cliques_added: usize,
    pub lp_solves: usize,
    pub simplex_pivots: usize,
    pub seed: Option<u64>,
    pub final_lp_class: Option<SolutionClass>,
    pub reinserted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepairResult {
    pub method: Method,
    pub removed: Vec<usize>,
    pub objective: f64,
    pub diagnostics: Diagnostics,
}

/// `L(I \ I_N)`: each survivor collects its `k` most valuable surviving
/// candidates. Negative values are never collected, as in the program where
/// the corresponding `y` would be left at zero.
pub fn evaluate_objective(weights: &ProviderWeights, removed: &[usize]) -> f64 {
    let n = weights.num_tuples();
    let mut gone = vec![false; n];
    for &i in removed {
        gone[i] = true;
    }
    let mut total = 0.0;
    for i in (0..n).filter(|&i| !gone[i]) {
        // candidates are sorted by decreasing value
        total += weights
            .candidates(i)
            .iter()
            .filter(|&&l| !gone[l])
            .map(|&l| weights.value(i, l))
            .take_while(|&v| v > 0.0)
            .take(weights.k())
            .sum::<f64>();
    }
    total
}

/// Puts removed tuples back, most valuable first (ties by id), whenever
/// they conflict with no current survivor. Returns the ascending result.
pub fn minimality_pass(graph: &ConflictGraph, removed: &[usize], tuple_value: &[f64]) -> Vec<usize> {
    let mut gone = vec![false; graph.num_tuples()];
    for &i in removed {
        gone[i] = true;
    }
    let mut order: Vec<usize> = removed.to_vec();
    order.sort_unstable();
    order.dedup();
    order.sort_by(|&a, &b| tuple_value[b].total_cmp(&tuple_value[a]).then(a.cmp(&b)));
    for &i in &order {
        if graph.neighbors(i).iter().all(|&l| gone[l]) {
            gone[i] = false;
        }
    }
    let mut out: Vec<usize> = order.into_iter().filter(|&i| gone[i]).collect();
    out.sort_unstable();
    out
}

/// Conflict graph and loss table for one instance.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub graph: ConflictGraph,
    pub table: LossTable,
}

pub fn prepare(inst: &Instance, dcs: &[DenialConstraint], loss: &LossParams) -> Result<Prepared> {
    let graph = detect_conflicts(inst, dcs);
    let table = build_loss_table(inst, &graph, loss)?;
    Ok(Prepared { graph, table })
}

/// Runs `method` on a prepared instance.
pub fn run_method(prep: &Prepared, method: Method, params: &RepairParams) -> Result<RepairResult> {
    let w = prep.table.weights();
    match method {
        Method::Exact => exact_repair_with(&prep.graph, w, &params.limits),
        Method::Clique => clique_repair_with(&prep.graph, w, params.epsilon, &params.limits),
        Method::Probabilistic => Ok(probabilistic_repair_with(&prep.graph, w, params.seed)),
        Method::Oracle => brute_force_oracle_with(&prep.graph, w, params.oracle_limit),
    }
}

pub fn exact_repair(inst: &Instance, dcs: &[DenialConstraint], params: &RepairParams) -> Result<RepairResult> {
    run_method(&prepare(inst, dcs, &params.loss)?, Method::Exact, params)
}

pub fn clique_repair(inst: &Instance, dcs: &[DenialConstraint], params: &RepairParams) -> Result<RepairResult> {
    run_method(&prepare(inst, dcs, &params.loss)?, Method::Clique, params)
}

pub fn probabilistic_repair(inst: &Instance, dcs: &[DenialConstraint], params: &RepairParams) -> Result<RepairResult> {
    run_method(&prepare(inst, dcs, &params.loss)?, Method::Probabilistic, params)
}

pub fn brute_force_oracle(inst: &Instance, dcs: &[DenialConstraint], params: &RepairParams) -> Result<RepairResult> {
    run_method(&prepare(inst, dcs, &params.loss)?, Method::Oracle, params)
}

/// Removed set, objective and reinsertion count after the minimality pass.
pub(crate) fn finish(
    method: Method,
    graph: &ConflictGraph,
    weights: &ProviderWeights,
    removed: &[usize],
    mut diagnostics: Diagnostics,
) -> RepairResult {
    let minimal = minimality_pass(graph, removed, weights.tuple_values());
    diagnostics.reinserted = removed.len() - minimal.len();
    RepairResult {
        method,
        objective: evaluate_objective(weights, &minimal),
        removed: minimal,
        diagnostics,
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use crate::constraints::ConflictGraph;
    use crate::depmodel::ProviderWeights;

    /// Weights where every pair value is `base[l]` for provider `l`; a
    /// tuple's worth is then driven by who it can draw from.
    pub fn weights_from_fn(
        n: usize,
        k: usize,
        graph: &ConflictGraph,
        f: impl Fn(usize, usize) -> f64,
    ) -> ProviderWeights {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            for l in 0..n {
                if i != l {
                    v[i * n + l] = f(i, l);
                }
            }
        }
        ProviderWeights::from_matrix(n, k, v, graph)
    }
}
