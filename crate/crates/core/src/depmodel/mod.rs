//! Dependency models and the conformance losses derived from them.
//!
//! For every owner tuple `t_l` and attribute `A_j` a regressor `f_lj` is fit on
//! `t_l` and its nearest conflict-free neighbours. It predicts the distance
//! `d_ilj` from the distances on the remaining attributes; the absolute
//! residual is the conformance loss `ℓ(t_i, t_l; A_j)`. Losses are turned
//! into positive pair values `L(t_i, t_l) = Σ_j (G - ℓ(t_i, t_l; A_j)) Γ_i`
//! that the repair objective maximizes.

mod losstable;
pub mod regress;

pub use losstable::{build_loss_table, GSetting, LossParams, LossTable};
pub use regress::{ModelKind, Regressor};

use crate::constraints::ConflictGraph;
use crate::error::{Error, Result};
use crate::relation::{DistanceVector, Instance};

/// The `κ` tuples of `I \ I_C` closest to `t_l` by tuple distance, excluding
/// `t_l` itself. Ties go to the lower id. Returns fewer than `κ` when the
/// clean pool is smaller.
pub fn knn_nonconflict(inst: &Instance, graph: &ConflictGraph, l: usize, kappa: usize) -> Result<Vec<usize>> {
    let mut pool: Vec<(f64, usize)> = (0..inst.len())
        .filter(|&s| !graph.in_conflict(s))
        .filter(|&s| s != l)
        .map(|s| (inst.tuple_distance(l, s), s))
        .collect();
    if pool.is_empty() && (0..inst.len()).all(|s| graph.in_conflict(s)) {
        return Err(Error::NoCleanTuples);
    }
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if pool.len() > kappa {
        pool.select_nth_unstable_by(kappa, cmp);
        pool.truncate(kappa);
    }
    pool.sort_by(cmp);
    Ok(pool.into_iter().map(|(_, s)| s).collect())
}

/// A fitted `f_lj`. Predictions are clamped into `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DependencyModel {
    pub owner: usize,
    pub attr: usize,
    pub kind: ModelKind,
    pub regressor: Regressor,
    pub training_rows: usize,
}

impl DependencyModel {
    pub fn predict(&self, v: &DistanceVector) -> f64 {
        self.predict_raw_slice(v.entries()).clamp(0.0, 1.0)
    }

    pub(crate) fn predict_slice(&self, entries: &[f64]) -> f64 {
        self.predict_raw_slice(entries).clamp(0.0, 1.0)
    }

    fn predict_raw_slice(&self, entries: &[f64]) -> f64 {
        let raw = self.regressor.predict(entries);
        if raw.is_nan() {
            0.0
        } else {
            raw
        }
    }
}

/// Fits one model per attribute for `owner` on the pool `{owner} ∪ N(owner)`.
/// Training rows are all unordered pairs of the pool.
pub(crate) fn train_owner(
    inst: &Instance,
    graph: &ConflictGraph,
    owner: usize,
    kappa: usize,
    kind: ModelKind,
) -> Result<Vec<DependencyModel>> {
    let mut pool = vec![owner];
    pool.extend(knn_nonconflict(inst, graph, owner, kappa)?);
    pool.sort_unstable();
    if pool.len() < 2 {
        return Err(Error::PoolTooSmall {
            owner,
            size: pool.len(),
        });
    }
    let m = inst.arity();
    let mut distances = Vec::new();
    for (x, &a) in pool.iter().enumerate() {
        for &b in &pool[x + 1..] {
            distances.push(inst.attribute_distances(a, b));
        }
    }
    Ok((0..m)
        .map(|j| {
            let xs: Vec<Vec<f64>> = distances
                .iter()
                .map(|d| DistanceVector::from_distances(d, j).entries().to_vec())
                .collect();
            let ys: Vec<f64> = distances.iter().map(|d| d[j]).collect();
            DependencyModel {
                owner,
                attr: j,
                kind,
                regressor: regress::fit(kind, &xs, &ys),
                training_rows: ys.len(),
            }
        })
        .collect())
}

/// Trains `f_lj`.
pub fn train_model(
    inst: &Instance,
    graph: &ConflictGraph,
    l: usize,
    j: usize,
    kappa: usize,
    kind: ModelKind,
) -> Result<DependencyModel> {
    let mut models = train_owner(inst, graph, l, kappa, kind)?;
    Ok(models.swap_remove(j))
}

/// Enhancement factor `Γ`: `∏_{s=1..u} (1 + γ/s)` for `u > 0`, its reciprocal
/// over `|u|` for `u < 0`, and 1 for `u = 0`.
pub fn gamma(u: i64, gamma: f64) -> f64 {
    let prod: f64 = (1..=u.unsigned_abs()).map(|s| 1.0 + gamma / s as f64).product();
    if u >= 0 {
        prod
    } else {
        1.0 / prod
    }
}

/// Greedy k-center selection of `size` model owners over tuple distance,
/// starting from tuple 0. Returns the pool (ascending) and, for every tuple,
/// the pool member whose models it uses.
pub fn select_model_pool(inst: &Instance, size: usize) -> (Vec<usize>, Vec<usize>) {
    let n = inst.len();
    if size >= n {
        return ((0..n).collect(), (0..n).collect());
    }
    let size = size.max(1);
    let mut centers = vec![0usize];
    let mut nearest: Vec<(f64, usize)> = (0..n).map(|i| (inst.tuple_distance(i, 0), 0)).collect();
    while centers.len() < size {
        let next = (0..n)
            .filter(|i| !centers.contains(i))
            .max_by(|&a, &b| nearest[a].0.total_cmp(&nearest[b].0).then(b.cmp(&a)))
            .expect("fewer centers than tuples");
        centers.push(next);
        for (i, slot) in nearest.iter_mut().enumerate() {
            let d = inst.tuple_distance(i, next);
            if d < slot.0 || (d == slot.0 && next < slot.1) {
                *slot = (d, next);
            }
        }
    }
    let owner_of = (0..n)
        .map(|i| if centers.contains(&i) { i } else { nearest[i].1 })
        .collect();
    centers.sort_unstable();
    (centers, owner_of)
}

/// Candidate providers `M̄(t_i)` from one row of pair values.
///
/// The pivot is the `k`-th best clean provider; every provider at least as
/// valuable as the pivot is kept. Below the pivot a tuple can never enter the
/// top `k`, since the `k` clean providers above it are never removed. With
/// fewer than `k` clean providers, every provider is a candidate. The result
/// is ordered by decreasing value, ties by ascending id.
pub fn candidate_set(values: &[f64], i: usize, graph: &ConflictGraph, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..values.len()).filter(|&l| l != i).collect();
    all.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let clean: Vec<usize> = all.iter().copied().filter(|&l| !graph.in_conflict(l)).collect();
    if clean.len() < k || k == 0 {
        return all;
    }
    let pivot = values[clean[k - 1]];
    all.retain(|&r| values[r] >= pivot);
    all
}

/// The pair values and candidate structure the optimizers consume.
#[derive(Debug, Clone, PartialEq)]
pub struct ProviderWeights {
    n: usize,
    k: usize,
    values: Vec<f64>,
    candidates: Vec<Vec<usize>>,
    tuple_value: Vec<f64>,
}

impl ProviderWeights {
    /// Builds weights from a dense row-major `n × n` matrix of `L(t_i, t_l)`
    /// (the diagonal is ignored). `L(t_i)` sums the `k` largest values.
    pub fn from_matrix(n: usize, k: usize, values: Vec<f64>, graph: &ConflictGraph) -> Self {
        assert_eq!(values.len(), n * n);
        assert_eq!(graph.num_tuples(), n);
        let providers: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                let row = &values[i * n..(i + 1) * n];
                let mut ls: Vec<usize> = (0..n).filter(|&l| l != i).collect();
                ls.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
                ls.truncate(k);
                ls
            })
            .collect();
        Self::with_providers(n, k, values, graph, &providers)
    }

    pub(crate) fn with_providers(
        n: usize,
        k: usize,
        values: Vec<f64>,
        graph: &ConflictGraph,
        providers: &[Vec<usize>],
    ) -> Self {
        let candidates = (0..n)
            .map(|i| candidate_set(&values[i * n..(i + 1) * n], i, graph, k))
            .collect();
        let tuple_value = providers
            .iter()
            .enumerate()
            .map(|(i, ps)| ps.iter().map(|&l| values[i * n + l]).sum())
            .collect();
        ProviderWeights {
            n,
            k,
            values,
            candidates,
            tuple_value,
        }
    }

    /// The same weights with every other tuple as a candidate. Only useful
    /// for checking that pruning loses nothing.
    pub fn unpruned(&self) -> ProviderWeights {
        let n = self.n;
        let candidates = (0..n)
            .map(|i| {
                let row = &self.values[i * n..(i + 1) * n];
                let mut all: Vec<usize> = (0..n).filter(|&l| l != i).collect();
                all.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
                all
            })
            .collect();
        ProviderWeights {
            candidates,
            ..self.clone()
        }
    }

    pub fn num_tuples(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `L(t_i, t_l)`.
    pub fn value(&self, i: usize, l: usize) -> f64 {
        self.values[i * self.n + l]
    }

    /// `M̄(t_i)`, by decreasing value.
    pub fn candidates(&self, i: usize) -> &[usize] {
        &self.candidates[i]
    }

    /// `L(t_i)` over the providers of the full instance.
    pub fn tuple_value(&self, i: usize) -> f64 {
        self.tuple_value[i]
    }

    pub fn tuple_values(&self) -> &[f64] {
        &self.tuple_value
    }

    /// `η = min L(t_i, t_l) / max L(t_i, t_l)` over candidate pairs.
    pub fn eta(&self) -> f64 {
        let (lo, hi) = (0..self.n)
            .flat_map(|i| self.candidates[i].iter().map(move |&l| (i, l)))
            .map(|(i, l)| self.value(i, l))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if hi > 0.0 && lo.is_finite() {
            lo / hi
        } else {
            0.0
        }
    }

    /// Total number of `(t_i, t_l ∈ M̄(t_i))` pairs.
    pub fn candidate_pairs(&self) -> usize {
        self.candidates.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{AttributeKind, Value};

    fn line(points: &[f64]) -> Instance {
        Instance::new(
            vec![("x".into(), AttributeKind::Numeric)],
            points.iter().map(|&p| vec![Value::Num(p)]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(0, 0.2), 1.0);
        assert!((gamma(2, 0.2) - 1.32).abs() < 1e-12);
        assert!((gamma(-2, 0.2) - 1.0 / 1.32).abs() < 1e-12);
        assert!((gamma(-2, 0.2) - 0.757576).abs() < 1e-6);
        assert_eq!(gamma(5, 0.0), 1.0);
    }

    #[test]
    fn gamma_reciprocal_and_monotone() {
        for g in [0.1, 0.2, 1.0, 5.0] {
            for u in -20i64..=20 {
                assert!((gamma(u, g) * gamma(-u, g) - 1.0).abs() < 1e-12);
                assert!(gamma(u + 1, g) > gamma(u, g));
            }
        }
    }

    #[test]
    fn knn_truncates_and_breaks_ties_by_id() {
        // 0 and 4 are at distance 1 from 2; 1 and 3 at distance 0.5 (after
        // normalization by the range 4).
        let inst = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let g = ConflictGraph::from_edges(5, []);
        assert_eq!(knn_nonconflict(&inst, &g, 2, 2).unwrap(), vec![1, 3]);
        assert_eq!(knn_nonconflict(&inst, &g, 2, 3).unwrap(), vec![1, 3, 0]);
        assert_eq!(knn_nonconflict(&inst, &g, 2, 10).unwrap(), vec![1, 3, 0, 4]);
    }

    #[test]
    fn knn_skips_conflict_tuples() {
        let inst = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let g = ConflictGraph::from_edges(5, [(1, 3)]);
        assert_eq!(knn_nonconflict(&inst, &g, 2, 2).unwrap(), vec![0, 4]);
        let all = ConflictGraph::from_edges(2, [(0, 1)]);
        assert!(matches!(
            knn_nonconflict(&line(&[0.0, 1.0]), &all, 0, 2),
            Err(Error::NoCleanTuples)
        ));
    }

    #[test]
    fn candidate_pivot_construction() {
        // Providers 1..=5 of tuple 0: clean values 0.9, 0.8, 0.7 (ids 1,2,3),
        // conflict values 0.85, 0.6 (ids 4,5).
        let g = ConflictGraph::from_edges(7, [(4, 6), (5, 6)]);
        let row = [0.0, 0.9, 0.8, 0.7, 0.85, 0.6, 0.1];
        assert_eq!(candidate_set(&row, 0, &g, 2), vec![1, 4, 2]);
    }

    #[test]
    fn candidates_without_conflicts_are_top_k() {
        let g = ConflictGraph::from_edges(4, []);
        let row = [0.0, 0.2, 0.9, 0.5];
        assert_eq!(candidate_set(&row, 0, &g, 2), vec![2, 3]);
        // fewer clean providers than k
        assert_eq!(candidate_set(&row, 0, &g, 5), vec![2, 3, 1]);
    }

    #[test]
    fn pool_selection() {
        let inst = line(&[0.0, 0.1, 5.0, 5.1, 10.0]);
        let (pool, owner) = select_model_pool(&inst, 3);
        assert_eq!(pool, vec![0, 2, 4]);
        assert_eq!(owner, vec![0, 0, 2, 2, 4]);
        let (all, ident) = select_model_pool(&inst, 10);
        assert_eq!(all, vec![0, 1, 2, 3, 4]);
        assert_eq!(ident, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn train_pool_too_small() {
        let inst = line(&[0.0, 1.0, 2.0]);
        let g = ConflictGraph::from_edges(3, [(0, 1)]);
        // owner 2 is the only clean tuple
        assert!(matches!(
            train_model(&inst, &g, 2, 0, 4, ModelKind::Linear),
            Err(Error::PoolTooSmall { owner: 2, size: 1 })
        ));
        assert!(train_model(&inst, &g, 0, 0, 4, ModelKind::Linear).is_ok());
    }

    #[test]
    fn predict_clamps() {
        let model = DependencyModel {
            owner: 0,
            attr: 0,
            kind: ModelKind::Linear,
            regressor: Regressor::Linear {
                coefficients: vec![-0.2, 0.0],
                regularized: false,
            },
            training_rows: 1,
        };
        assert_eq!(model.predict(&DistanceVector::from_entries(vec![1.0, 0.7])), 0.0);
        let c = DependencyModel {
            regressor: Regressor::Linear {
                coefficients: vec![0.3, 0.0],
                regularized: false,
            },
            ..model
        };
        assert!((c.predict(&DistanceVector::from_entries(vec![1.0, 0.9])) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn trained_model_replays_exact_linear_targets() {
        // y = 2x exactly, so d_y = d_x for every pair; f_{l,y} learns
        // d_y = d_x and reproduces its training targets.
        let n = 8;
        let inst = Instance::new(
            vec![
                ("x".into(), AttributeKind::Numeric),
                ("y".into(), AttributeKind::Numeric),
            ],
            (0..n)
                .map(|k| {
                    let x = (k * k) as f64 / 7.0;
                    vec![Value::Num(x), Value::Num(2.0 * x)]
                })
                .collect(),
        )
        .unwrap();
        let g = ConflictGraph::from_edges(n, []);
        let f = train_model(&inst, &g, 3, 1, 5, ModelKind::Linear).unwrap();
        for a in 0..n {
            for b in 0..n {
                let v = inst.distance_vector(a, b, 1);
                assert!((f.predict(&v) - inst.value_distance(a, b, 1)).abs() < 1e-9);
            }
        }
    }
}
