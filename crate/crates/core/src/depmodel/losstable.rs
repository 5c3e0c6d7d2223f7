use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{gamma, select_model_pool, train_owner, DependencyModel, ModelKind, ProviderWeights};
use crate::constraints::ConflictGraph;
use crate::error::{Error, Result};
use crate::relation::Instance;

/// How the normalizing constant `G` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GSetting {
    /// `1.05 ×` the largest per-attribute loss.
    #[default]
    Auto,
    Fixed(f64),
}

pub const AUTO_G_FACTOR: f64 = 1.05;

#[derive(Debug, Clone, PartialEq)]
pub struct LossParams {
    pub gamma: f64,
    pub kappa: usize,
    pub k: usize,
    pub g: GSetting,
    pub model: ModelKind,
    /// Number of model owners; `None` trains one model set per tuple.
    pub pool: Option<usize>,
}

impl Default for LossParams {
    fn default() -> Self {
        LossParams {
            gamma: 0.2,
            kappa: 10,
            k: 4,
            g: GSetting::Auto,
            model: ModelKind::Linear,
            pool: None,
        }
    }
}

impl LossParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::Config(format!(
                "gamma must be a non-negative real, got {}",
                self.gamma
            )));
        }
        if self.kappa == 0 {
            return Err(Error::Config("kappa must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.pool == Some(0) {
            return Err(Error::Config("model pool size must be at least 1".into()));
        }
        if let GSetting::Fixed(g) = self.g {
            if !g.is_finite() {
                return Err(Error::Config(format!("G must be finite, got {g}")));
            }
        }
        Ok(())
    }
}

/// Every loss and value quantity for one instance. `Γ` is computed once here
/// and never updated by the repair algorithms.
#[derive(Debug, Clone)]
pub struct LossTable {
    n: usize,
    m: usize,
    params: LossParams,
    g: f64,
    max_attr_loss: f64,
    models: Vec<Vec<DependencyModel>>,
    /// index into `models` for each tuple acting as `t_l`
    model_of: Vec<usize>,
    pool: Vec<usize>,
    pair_loss: Vec<f64>,
    raw_loss: Vec<f64>,
    u: Vec<i64>,
    gamma: Vec<f64>,
    providers: Vec<Vec<usize>>,
    weights: ProviderWeights,
}

/// Fills `out[j]` with `ℓ(t_i, t_l; A_j)` using the given model set.
fn attr_losses(
    inst: &Instance,
    models: &[DependencyModel],
    i: usize,
    l: usize,
    dist: &mut [f64],
    entries: &mut Vec<f64>,
    out: &mut [f64],
) {
    inst.attribute_distances_into(i, l, dist);
    for (j, f) in models.iter().enumerate() {
        entries.clear();
        entries.push(1.0);
        entries.extend(dist.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &d)| d));
        out[j] = (dist[j] - f.predict_slice(entries)).abs();
    }
}

pub fn build_loss_table(inst: &Instance, graph: &ConflictGraph, params: &LossParams) -> Result<LossTable> {
    params.validate()?;
    let n = inst.len();
    let m = inst.arity();
    if graph.num_tuples() != n {
        return Err(Error::InvalidInstance(format!(
            "conflict graph covers {} tuples, instance has {n}",
            graph.num_tuples()
        )));
    }
    if n > 0 && graph.conflict_set().len() == n {
        return Err(Error::NoCleanTuples);
    }

    let (pool, owner_of) = select_model_pool(inst, params.pool.unwrap_or(n));
    let mut models = Vec::with_capacity(pool.len());
    if n >= 2 {
        for &owner in &pool {
            models.push(train_owner(inst, graph, owner, params.kappa, params.model)?);
        }
    }
    let model_of: Vec<usize> = owner_of
        .iter()
        .map(|o| pool.binary_search(o).expect("owner is a pool member"))
        .collect();

    // (1)-(2) pair losses
    let mut pair_loss = vec![0.0; n * n];
    let mut max_attr_loss: f64 = 0.0;
    let mut dist = vec![0.0; m];
    let mut entries = Vec::with_capacity(m);
    let mut losses = vec![0.0; m];
    for i in 0..n {
        for l in 0..n {
            if i == l {
                continue;
            }
            attr_losses(inst, &models[model_of[l]], i, l, &mut dist, &mut entries, &mut losses);
            pair_loss[i * n + l] = losses.iter().sum();
            max_attr_loss = losses.iter().fold(max_attr_loss, |a, &b| a.max(b));
        }
    }

    // (3)-(4) providers and raw tuple loss
    let k = params.k;
    let providers: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let row = &pair_loss[i * n..(i + 1) * n];
            let mut ls: Vec<usize> = (0..n).filter(|&l| l != i).collect();
            ls.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
            ls.truncate(k);
            ls
        })
        .collect();
    let raw_loss: Vec<f64> = providers
        .iter()
        .enumerate()
        .map(|(i, ps)| ps.iter().map(|&l| pair_loss[i * n + l]).sum())
        .collect();

    // (5)-(6) enhancement
    let u: Vec<i64> = (0..n)
        .map(|i| {
            graph.neighbors(i).iter().fold(0i64, |acc, &l| {
                if raw_loss[i] < raw_loss[l] {
                    acc + 1
                } else if raw_loss[i] > raw_loss[l] {
                    acc - 1
                } else {
                    acc
                }
            })
        })
        .collect();
    let gammas: Vec<f64> = u.iter().map(|&ui| gamma(ui, params.gamma)).collect();

    // (7) G; an all-zero loss table would make every value 0 under the
    // scaled rule, so fall back to 1
    let g = match params.g {
        GSetting::Fixed(g) => g,
        GSetting::Auto if max_attr_loss > 0.0 => AUTO_G_FACTOR * max_attr_loss,
        GSetting::Auto => 1.0,
    };

    // (8) pair values
    let mg = m as f64 * g;
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for l in 0..n {
            if i != l {
                values[i * n + l] = gammas[i] * (mg - pair_loss[i * n + l]);
            }
        }
    }

    // (9)-(10)
    let weights = ProviderWeights::with_providers(n, k, values, graph, &providers);

    Ok(LossTable {
        n,
        m,
        params: params.clone(),
        g,
        max_attr_loss,
        models,
        model_of,
        pool,
        pair_loss,
        raw_loss,
        u,
        gamma: gammas,
        providers,
        weights,
    })
}

impl LossTable {
    pub fn num_tuples(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &LossParams {
        &self.params
    }

    /// The resolved `G`.
    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn max_attr_loss(&self) -> f64 {
        self.max_attr_loss
    }

    /// Owners that have their own trained models, ascending.
    pub fn model_pool(&self) -> &[usize] {
        &self.pool
    }

    /// The model set used when `t_l` is the provider.
    pub fn models_for(&self, l: usize) -> &[DependencyModel] {
        &self.models[self.model_of[l]]
    }

    /// `ℓ(t_i, t_l; A_j)`, recomputed from the models.
    pub fn pair_attr_loss(&self, inst: &Instance, i: usize, l: usize, j: usize) -> f64 {
        if i == l {
            return 0.0;
        }
        let mut dist = vec![0.0; self.m];
        let mut entries = Vec::with_capacity(self.m);
        let mut out = vec![0.0; self.m];
        attr_losses(inst, self.models_for(l), i, l, &mut dist, &mut entries, &mut out);
        out[j]
    }

    /// `ℓ(t_i, t_l)`.
    pub fn pair_loss(&self, i: usize, l: usize) -> f64 {
        self.pair_loss[i * self.n + l]
    }

    /// `ℓ(t_i)`.
    pub fn tuple_raw_loss(&self, i: usize) -> f64 {
        self.raw_loss[i]
    }

    pub fn u(&self, i: usize) -> i64 {
        self.u[i]
    }

    /// `Γ_i`.
    pub fn gamma(&self, i: usize) -> f64 {
        self.gamma[i]
    }

    /// `L(t_i, t_l)`.
    pub fn pair_value(&self, i: usize, l: usize) -> f64 {
        self.weights.value(i, l)
    }

    /// `L(t_i)`.
    pub fn tuple_value(&self, i: usize) -> f64 {
        self.weights.tuple_value(i)
    }

    /// `M(t_i)`, by increasing loss.
    pub fn providers(&self, i: usize) -> &[usize] {
        &self.providers[i]
    }

    /// `M̄(t_i)`, by decreasing value.
    pub fn candidates(&self, i: usize) -> &[usize] {
        self.weights.candidates(i)
    }

    pub fn weights(&self) -> &ProviderWeights {
        &self.weights
    }

    /// Per-tuple diagnostic rows: losses, enhancement, value and provider
    /// lists (space separated).
    pub fn write_diagnostics<W: Write>(&self, graph: &ConflictGraph, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "id",
            "in_conflict",
            "raw_loss",
            "u",
            "gamma",
            "tuple_value",
            "providers",
            "candidates",
        ])?;
        let join = |ids: &[usize]| ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        for i in 0..self.n {
            out.write_record([
                i.to_string(),
                graph.in_conflict(i).to_string(),
                self.raw_loss[i].to_string(),
                self.u[i].to_string(),
                self.gamma[i].to_string(),
                self.tuple_value(i).to_string(),
                join(&self.providers[i]),
                join(self.candidates(i)),
            ])?;
        }
        out.flush().map_err(|e| Error::io("<diagnostics>", e))?;
        Ok(())
    }
}
