use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{finish, Diagnostics, Method, RepairResult};
use crate::constraints::ConflictGraph;
use crate::depmodel::ProviderWeights;

/// Probability of keeping `t_i` over `t_l`: `L(t_i) / (L(t_i) + L(t_l))`.
/// Negative values count as zero; two zeros give 0.5.
pub fn keep_probability(li: f64, ll: f64) -> f64 {
    let (a, b) = (li.max(0.0), ll.max(0.0));
    if a + b > 0.0 {
        a / (a + b)
    } else {
        0.5
    }
}

/// Visits each conflict edge once in ascending order and removes one
/// endpoint at random, the less valuable one being more likely to go.
pub fn probabilistic_repair_with(graph: &ConflictGraph, weights: &ProviderWeights, seed: u64) -> RepairResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gone = vec![false; graph.num_tuples()];
    for &(i, l) in graph.edges() {
        let p = keep_probability(weights.tuple_value(i), weights.tuple_value(l));
        let u: f64 = rng.random();
        if u < 1.0 - p {
            gone[i] = true;
        } else {
            gone[l] = true;
        }
    }
    let removed: Vec<usize> = (0..gone.len()).filter(|&i| gone[i]).collect();
    let diagnostics = Diagnostics {
        iterations: graph.edges().len(),
        seed: Some(seed),
        ..Default::default()
    };
    finish(Method::Probabilistic, graph, weights, &removed, diagnostics)
}
