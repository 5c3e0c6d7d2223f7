//! Denial constraints, conflict detection, cliques and removal-set checks.

mod conflict;
mod parse;

pub use conflict::{detect_conflicts, violates, ConflictGraph};
pub use parse::{parse_dc, parse_dc_file, DenialConstraint, Operator, Predicate};

/// Grows a clique from `seed` by scanning `candidates` in ascending id order
/// and adding every candidate adjacent to all current members. One pass is
/// enough: a rejected candidate stays rejected as the clique only grows.
/// The result is maximal with respect to `candidates`.
pub fn greedy_maximal_clique(graph: &ConflictGraph, seed: usize, candidates: &[usize]) -> Vec<usize> {
    let mut sorted: Vec<usize> = candidates.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut clique = vec![seed];
    for c in sorted {
        if c != seed && clique.iter().all(|&q| graph.adjacent(q, c)) {
            clique.push(c);
        }
    }
    clique.sort_unstable();
    clique
}

/// True iff every pair of members is adjacent.
pub fn is_clique(graph: &ConflictGraph, members: &[usize]) -> bool {
    members
        .iter()
        .enumerate()
        .all(|(a, &i)| members[a + 1..].iter().all(|&l| graph.adjacent(i, l)))
}

fn removed_mask(n: usize, removed: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &i in removed {
        mask[i] = true;
    }
    mask
}

/// `I \ I_N` is conflict free.
pub fn is_removal_set(graph: &ConflictGraph, removed: &[usize]) -> bool {
    let mask = removed_mask(graph.num_tuples(), removed);
    graph.edges().iter().all(|&(a, b)| mask[a] || mask[b])
}

/// A removal set where every removed tuple conflicts with some survivor, so
/// putting any of them back reintroduces a violation.
pub fn is_minimal_removal_set(graph: &ConflictGraph, removed: &[usize]) -> bool {
    let mask = removed_mask(graph.num_tuples(), removed);
    graph.edges().iter().all(|&(a, b)| mask[a] || mask[b])
        && removed.iter().all(|&i| graph.neighbors(i).iter().any(|&l| !mask[l]))
}

/// All minimal removal sets, each ascending, in lexicographic order of their
/// bitmask over `I_C`. Returns `None` when `|I_C|` exceeds `limit`.
pub fn enumerate_minimal_removal_sets(graph: &ConflictGraph, limit: usize) -> Option<Vec<Vec<usize>>> {
    let ic = graph.conflict_set();
    if ic.len() > limit || ic.len() >= usize::BITS as usize {
        return None;
    }
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << ic.len()) {
        let removed: Vec<usize> = ic
            .iter()
            .enumerate()
            .filter(|&(b, _)| bits >> b & 1 == 1)
            .map(|(_, &t)| t)
            .collect();
        if is_minimal_removal_set(graph, &removed) {
            out.push(removed);
        }
    }
    out.sort();
    Some(out)
}
