//! LP and ILP solving for the repair models.
//!
//! Two LP engines sit behind [`solve_lp`]: the dense tableau simplex in
//! [`simplex`] and a sparse revised simplex from `microlp`, used for models
//! too large for a dense tableau. Both return basic optimal solutions.

mod bnb;
mod model;
mod osr;
pub mod simplex;

pub use bnb::{solve_ilp, IlpOptions};
pub use model::{classify_solution, classify_values, LpModel, LpSolution, LpStatus, Row, SolutionClass};
pub use osr::{build_osr_model, OsrModel};
pub use simplex::{solve_dense, SimplexOptions};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tableau size (rows × columns) above which `Auto` switches to the sparse
/// engine.
pub const DENSE_CELL_LIMIT: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Auto,
    Dense,
    Sparse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpOptions {
    pub engine: Engine,
    pub simplex: SimplexOptions,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            engine: Engine::Auto,
            simplex: SimplexOptions::default(),
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(Engine::Auto),
            "dense" => Ok(Engine::Dense),
            "sparse" => Ok(Engine::Sparse),
            other => Err(Error::Config(format!("unknown LP engine `{other}`"))),
        }
    }
}

impl Engine {
    pub fn resolve(self, model: &LpModel) -> Engine {
        match self {
            Engine::Auto => {
                let rows = model.num_rows();
                let cells = rows.saturating_mul(model.num_variables() + 2 * rows);
                if cells <= DENSE_CELL_LIMIT {
                    Engine::Dense
                } else {
                    Engine::Sparse
                }
            }
            e => e,
        }
    }
}

/// Solves the LP relaxation with the configured engine.
pub fn solve_lp(model: &LpModel, opts: &LpOptions) -> Result<LpSolution> {
    match opts.engine.resolve(model) {
        Engine::Sparse => solve_sparse(model, opts.simplex.max_iterations),
        _ => solve_dense(model, &opts.simplex),
    }
}

/// Solves the LP relaxation with `microlp`. The solver cannot be stopped
/// after a pivot count, so a solve that needed more than `max_iterations`
/// pivots is reported as hitting the limit once it returns.
pub fn solve_sparse(model: &LpModel, max_iterations: usize) -> Result<LpSolution> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem, SolveOutcome};

    let n = model.num_variables();
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = (0..n)
        .map(|v| p.add_var(model.objective()[v], (model.lower()[v], model.upper()[v])))
        .collect();
    for row in model.rows() {
        let expr: Vec<_> = row.coeffs.iter().map(|&(v, c)| (vars[v], c)).collect();
        p.add_constraint(expr, ComparisonOp::Le, row.rhs);
    }
    match p.solve() {
        Ok(SolveOutcome::Solution(sol)) if sol.stats().lp_iterations as usize > max_iterations => Ok(LpSolution {
            status: LpStatus::IterationLimit,
            values: vec![0.0; n],
            objective_value: f64::NEG_INFINITY,
            iterations: sol.stats().lp_iterations as usize,
        }),
        Ok(SolveOutcome::Solution(sol)) => {
            let values: Vec<f64> = vars
                .iter()
                .enumerate()
                .map(|(v, &var)| sol.var_value_raw(var).clamp(model.lower()[v], model.upper()[v]))
                .collect();
            Ok(LpSolution {
                status: LpStatus::Optimal,
                objective_value: model.evaluate(&values),
                values,
                iterations: sol.stats().lp_iterations as usize,
            })
        }
        Ok(SolveOutcome::Interrupted(_)) => Ok(LpSolution {
            status: LpStatus::IterationLimit,
            values: vec![0.0; n],
            objective_value: f64::NEG_INFINITY,
            iterations: 0,
        }),
        Err(microlp::Error::Infeasible) => Ok(LpSolution::infeasible(n, 0)),
        Err(microlp::Error::Unbounded) => Err(Error::Unbounded),
        Err(e) => Err(Error::Solver(e.to_string())),
    }
}
