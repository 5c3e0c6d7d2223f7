use std::collections::HashSet;

use super::{finish, Diagnostics, Method, RepairResult, SolverLimits};
use crate::constraints::{greedy_maximal_clique, ConflictGraph};
use crate::depmodel::ProviderWeights;
use crate::error::{Error, Result};
use crate::optim::{build_osr_model, classify_values, solve_lp, LpStatus};

/// Solves the LP relaxation, adding a clique row for every half-valued
/// region until no new clique with more than two members shows up, then
/// removes every conflict tuple with `x_i ≤ 0.5`.
///
/// Cliques are seeded from unmarked half-valued tuples and grown over the
/// whole conflict set. A clique already in the model does not count as new,
/// which keeps the loop finite when a grown clique contains tuples whose
/// values already satisfy its row.
pub fn clique_repair_with(
    graph: &ConflictGraph,
    weights: &ProviderWeights,
    eps: f64,
    limits: &SolverLimits,
) -> Result<RepairResult> {
    let n = graph.num_tuples();
    let ic = graph.conflict_set();
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut diag = Diagnostics::default();
    loop {
        diag.iterations += 1;
        let osr = build_osr_model(weights, graph, &cliques);
        let sol = solve_lp(&osr.model, &limits.lp())?;
        diag.lp_solves += 1;
        diag.simplex_pivots += sol.iterations;
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(Error::Infeasible),
            LpStatus::IterationLimit => return Err(Error::IterationLimit(limits.lp_max_iterations)),
        }
        diag.final_lp_class = Some(classify_values(&sol.values, eps));

        let x = |i: usize| osr.x_value(&sol.values, i);
        let half: Vec<usize> = ic.iter().copied().filter(|&i| (x(i) - 0.5).abs() <= eps).collect();
        let mut marked = vec![false; n];
        let mut largest_new = 0;
        for &seed in &half {
            if marked[seed] {
                continue;
            }
            let q = greedy_maximal_clique(graph, seed, ic);
            for &t in &q {
                marked[t] = true;
            }
            if seen.insert(q.clone()) {
                largest_new = largest_new.max(q.len());
                if q.len() > 2 {
                    cliques.push(q);
                    diag.cliques_added += 1;
                }
            }
        }
        if largest_new <= 2 {
            let removed: Vec<usize> = ic.iter().copied().filter(|&i| x(i) <= 0.5 + eps).collect();
            return Ok(finish(Method::Clique, graph, weights, &removed, diag));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::weights_from_fn;
    use super::*;
    use crate::constraints::is_minimal_removal_set;

    fn lim() -> SolverLimits {
        SolverLimits::default()
    }

    #[test]
    fn integral_first_solve_is_one_iteration() {
        let g = ConflictGraph::from_edges(5, [(0, 1)]);
        let w = weights_from_fn(5, 2, &g, |i, _| if i == 0 { 0.5 } else { 1.0 });
        let r = clique_repair_with(&g, &w, 1e-6, &lim()).unwrap();
        assert_eq!(r.diagnostics.iterations, 1);
        assert_eq!(r.removed, vec![0]);
    }

    #[test]
    fn equal_triangle_needs_a_clique_row() {
        let g = ConflictGraph::from_edges(6, [(0, 1), (0, 2), (1, 2)]);
        let w = weights_from_fn(6, 2, &g, |_, _| 1.0);
        let r = clique_repair_with(&g, &w, 1e-6, &lim()).unwrap();
        assert_eq!(r.diagnostics.iterations, 2);
        assert_eq!(r.diagnostics.cliques_added, 1);
        assert_eq!(r.removed.len(), 2);
        assert!(is_minimal_removal_set(&g, &r.removed));
    }

    #[test]
    fn path_needs_no_clique() {
        let g = ConflictGraph::from_edges(6, [(0, 1), (1, 2)]);
        let w = weights_from_fn(6, 2, &g, |_, _| 1.0);
        let r = clique_repair_with(&g, &w, 1e-6, &lim()).unwrap();
        assert_eq!(r.diagnostics.cliques_added, 0);
        assert!(is_minimal_removal_set(&g, &r.removed));
    }
}
