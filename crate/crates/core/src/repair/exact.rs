use super::{finish, Diagnostics, Method, RepairResult, SolverLimits};
use crate::constraints::ConflictGraph;
use crate::depmodel::ProviderWeights;
use crate::error::{Error, Result};
use crate::optim::{build_osr_model, solve_ilp, LpStatus};

/// Solves the repair program to integrality and removes every conflict tuple
/// with `x_i = 0`.
pub fn exact_repair_with(
    graph: &ConflictGraph,
    weights: &ProviderWeights,
    limits: &SolverLimits,
) -> Result<RepairResult> {
    let osr = build_osr_model(weights, graph, &[]);
    let sol = solve_ilp(&osr.model, &limits.ilp())?;
    if sol.status != LpStatus::Optimal {
        // x = 0, y = 0 is always feasible
        return Err(Error::Infeasible);
    }
    let removed: Vec<usize> = graph
        .conflict_set()
        .iter()
        .copied()
        .filter(|&i| osr.x_value(&sol.values, i) < 0.5)
        .collect();
    let diagnostics = Diagnostics {
        iterations: sol.iterations,
        lp_solves: sol.iterations + 1,
        ..Default::default()
    };
    Ok(finish(Method::Exact, graph, weights, &removed, diagnostics))
}
