//! Regressors mapping a distance vector to a predicted attribute distance.
//!
//! Inputs always carry a leading constant 1, which acts as the intercept for
//! the linear kinds and is ignored by the tree and Gaussian-process kinds.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::Error;

/// Penalty used by [`ModelKind::Ridge`]. The intercept is never penalized.
pub const RIDGE_LAMBDA: f64 = 1e-2;
/// Penalty applied when the least-squares Gram matrix is singular.
pub const RIDGE_FALLBACK_LAMBDA: f64 = 1e-6;
/// Relative pivot threshold below which the Gram matrix counts as singular.
const SINGULAR_PIVOT: f64 = 1e-12;

const TREE_MAX_DEPTH: usize = 4;
const TREE_MIN_LEAF: usize = 2;

const GP_LENGTH_SCALE: f64 = 0.5;
const GP_NOISE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[default]
    Linear,
    Ridge,
    Tree,
    Gaussian,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Linear,
        ModelKind::Ridge,
        ModelKind::Tree,
        ModelKind::Gaussian,
    ];
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Linear => "linear",
            ModelKind::Ridge => "ridge",
            ModelKind::Tree => "tree",
            ModelKind::Gaussian => "gaussian",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(ModelKind::Linear),
            "ridge" => Ok(ModelKind::Ridge),
            "tree" => Ok(ModelKind::Tree),
            "gaussian" | "gp" => Ok(ModelKind::Gaussian),
            other => Err(Error::Config(format!("unknown model kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf(f64),
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    fn predict(&self, x: &[f64]) -> f64 {
        match self {
            TreeNode::Leaf(v) => *v,
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if x[*feature] <= *threshold {
                    left.predict(x)
                } else {
                    right.predict(x)
                }
            }
        }
    }
}

/// A fitted regressor. `predict` returns the raw (unclamped) output.
#[derive(Debug, Clone, PartialEq)]
pub enum Regressor {
    Linear {
        coefficients: Vec<f64>,
        /// Whether the ridge fallback was needed.
        regularized: bool,
    },
    Tree(TreeNode),
    Gaussian {
        inputs: Vec<Vec<f64>>,
        weights: Vec<f64>,
        mean: f64,
        signal: f64,
    },
}

impl Regressor {
    pub fn predict(&self, x: &[f64]) -> f64 {
        match self {
            Regressor::Linear { coefficients, .. } => coefficients.iter().zip(x).map(|(b, v)| b * v).sum(),
            Regressor::Tree(root) => root.predict(x),
            Regressor::Gaussian {
                inputs,
                weights,
                mean,
                signal,
            } => {
                mean + inputs
                    .iter()
                    .zip(weights)
                    .map(|(xi, w)| w * rbf(xi, x, *signal))
                    .sum::<f64>()
            }
        }
    }

    pub fn coefficients(&self) -> Option<&[f64]> {
        match self {
            Regressor::Linear { coefficients, .. } => Some(coefficients),
            _ => None,
        }
    }
}

/// Fits `kind` on rows `xs` (each with a leading 1) and targets `ys`.
pub fn fit(kind: ModelKind, xs: &[Vec<f64>], ys: &[f64]) -> Regressor {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty(), "at least one training row is required");
    match kind {
        ModelKind::Linear => least_squares(xs, ys, None),
        ModelKind::Ridge => least_squares(xs, ys, Some(RIDGE_LAMBDA)),
        ModelKind::Tree => {
            let idx: Vec<usize> = (0..xs.len()).collect();
            Regressor::Tree(grow(xs, ys, &idx, 0))
        }
        ModelKind::Gaussian => gaussian_process(xs, ys),
    }
}

fn gram(xs: &[Vec<f64>], ys: &[f64]) -> (DMatrix<f64>, DVector<f64>) {
    let p = xs[0].len();
    let mut g = DMatrix::<f64>::zeros(p, p);
    let mut r = DVector::<f64>::zeros(p);
    for (x, &y) in xs.iter().zip(ys) {
        for a in 0..p {
            r[a] += x[a] * y;
            for b in a..p {
                g[(a, b)] += x[a] * x[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            g[(a, b)] = g[(b, a)];
        }
    }
    (g, r)
}

fn penalized_solve(g: &DMatrix<f64>, r: &DVector<f64>, lambda: f64) -> Option<DVector<f64>> {
    let mut g = g.clone();
    for a in 1..g.nrows() {
        g[(a, a)] += lambda;
    }
    if g.nrows() > 0 && g[(0, 0)] == 0.0 {
        g[(0, 0)] += lambda;
    }
    g.cholesky().map(|c| c.solve(r))
}

/// Normal equations `(XᵀX) β = Xᵀy`, switching to a tiny ridge penalty when
/// the Gram matrix is (numerically) singular.
fn least_squares(xs: &[Vec<f64>], ys: &[f64], lambda: Option<f64>) -> Regressor {
    let (g, r) = gram(xs, ys);
    if let Some(lambda) = lambda {
        let beta = penalized_solve(&g, &r, lambda).expect("ridge system is positive definite");
        return Regressor::Linear {
            coefficients: beta.iter().copied().collect(),
            regularized: true,
        };
    }
    let scale = (0..g.nrows()).map(|a| g[(a, a)]).fold(0.0, f64::max);
    if let Some(chol) = g.clone().cholesky() {
        let l = chol.l_dirty();
        let min_pivot = (0..g.nrows())
            .map(|a| l[(a, a)] * l[(a, a)])
            .fold(f64::INFINITY, f64::min);
        if min_pivot > SINGULAR_PIVOT * scale.max(f64::MIN_POSITIVE) {
            let beta = chol.solve(&r);
            if beta.iter().all(|b| b.is_finite()) {
                return Regressor::Linear {
                    coefficients: beta.iter().copied().collect(),
                    regularized: false,
                };
            }
        }
    }
    let beta = penalized_solve(&g, &r, RIDGE_FALLBACK_LAMBDA).expect("ridge system is positive definite");
    Regressor::Linear {
        coefficients: beta.iter().copied().collect(),
        regularized: true,
    }
}

fn mean(ys: &[f64], idx: &[usize]) -> f64 {
    idx.iter().map(|&i| ys[i]).sum::<f64>() / idx.len() as f64
}

fn sse(ys: &[f64], idx: &[usize]) -> f64 {
    let mu = mean(ys, idx);
    idx.iter().map(|&i| (ys[i] - mu).powi(2)).sum()
}

fn grow(xs: &[Vec<f64>], ys: &[f64], idx: &[usize], depth: usize) -> TreeNode {
    let leaf = TreeNode::Leaf(mean(ys, idx));
    if depth >= TREE_MAX_DEPTH || idx.len() < 2 * TREE_MIN_LEAF {
        return leaf;
    }
    let parent = sse(ys, idx);
    if parent <= 1e-18 {
        return leaf;
    }
    let p = xs[0].len();
    let mut best: Option<(f64, usize, f64)> = None;
    for feature in 1..p {
        let mut order: Vec<usize> = idx.to_vec();
        order.sort_by(|&a, &b| xs[a][feature].total_cmp(&xs[b][feature]).then(a.cmp(&b)));
        for cut in TREE_MIN_LEAF..=(order.len() - TREE_MIN_LEAF) {
            let (lo, hi) = (xs[order[cut - 1]][feature], xs[order[cut]][feature]);
            if lo == hi {
                continue;
            }
            let cost = sse(ys, &order[..cut]) + sse(ys, &order[cut..]);
            if best.is_none_or(|(c, _, _)| cost < c - 1e-15) {
                best = Some((cost, feature, 0.5 * (lo + hi)));
            }
        }
    }
    match best {
        Some((cost, feature, threshold)) if cost < parent - 1e-15 => {
            let (left, right): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| xs[i][feature] <= threshold);
            TreeNode::Split {
                feature,
                threshold,
                left: Box::new(grow(xs, ys, &left, depth + 1)),
                right: Box::new(grow(xs, ys, &right, depth + 1)),
            }
        }
        _ => leaf,
    }
}

fn rbf(a: &[f64], b: &[f64], signal: f64) -> f64 {
    // skip the constant entry
    let d2: f64 = a.iter().zip(b).skip(1).map(|(x, y)| (x - y).powi(2)).sum();
    signal * (-d2 / (2.0 * GP_LENGTH_SCALE * GP_LENGTH_SCALE)).exp()
}

fn gaussian_process(xs: &[Vec<f64>], ys: &[f64]) -> Regressor {
    let n = xs.len();
    let mu = ys.iter().sum::<f64>() / n as f64;
    let var = ys.iter().map(|y| (y - mu).powi(2)).sum::<f64>() / n as f64;
    let signal = var.max(1e-4);
    let k = DMatrix::from_fn(n, n, |a, b| {
        rbf(&xs[a], &xs[b], signal) + if a == b { GP_NOISE * signal } else { 0.0 }
    });
    let centered = DVector::from_iterator(n, ys.iter().map(|y| y - mu));
    let weights = k
        .cholesky()
        .map(|c| c.solve(&centered))
        .unwrap_or_else(|| DVector::zeros(n));
    Regressor::Gaussian {
        inputs: xs.to_vec(),
        weights: weights.iter().copied().collect(),
        mean: mu,
        signal,
    }
}
