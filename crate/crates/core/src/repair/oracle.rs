use super::{evaluate_objective, Diagnostics, Method, RepairResult};
use crate::constraints::{enumerate_minimal_removal_sets, ConflictGraph};
use crate::depmodel::ProviderWeights;
use crate::error::{Error, Result};

pub const DEFAULT_ORACLE_LIMIT: usize = 16;

/// Scores every minimal removal set and returns the best; ties go to the
/// lexicographically smallest set. `iterations` counts the sets scored.
pub fn brute_force_oracle_with(graph: &ConflictGraph, weights: &ProviderWeights, limit: usize) -> Result<RepairResult> {
    let sets = enumerate_minimal_removal_sets(graph, limit).ok_or(Error::OracleLimit {
        size: graph.conflict_set().len(),
        limit,
    })?;
    let mut best: Option<(f64, &Vec<usize>)> = None;
    for s in &sets {
        let obj = evaluate_objective(weights, s);
        if best.is_none_or(|(b, _)| obj > b) {
            best = Some((obj, s));
        }
    }
    let (objective, removed) = best.expect("the conflict set itself contains a minimal removal set");
    Ok(RepairResult {
        method: Method::Oracle,
        removed: removed.clone(),
        objective,
        diagnostics: Diagnostics {
            iterations: sets.len(),
            ..Default::default()
        },
    })
}
