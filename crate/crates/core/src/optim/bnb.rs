use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::model::{LpModel, LpSolution, LpStatus};
use super::{solve_lp, LpOptions};
use crate::error::{Error, Result};

pub const PRUNE_TOL: f64 = 1e-9;
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IlpOptions {
    pub lp: LpOptions,
    pub max_nodes: usize,
}

impl Default for IlpOptions {
    fn default() -> Self {
        IlpOptions {
            lp: LpOptions::default(),
            max_nodes: 100_000,
        }
    }
}

struct Node {
    bound: f64,
    id: usize,
    fixings: Vec<(usize, f64)>,
    values: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap: larger bound first, then older node
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound).then(other.id.cmp(&self.id))
    }
}

/// Variable to branch on: lowest priority class, then closest to 0.5, then
/// lowest index. `None` when every value is integral.
fn branch_variable(model: &LpModel, values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| (v - v.round()).abs() > INTEGRALITY_TOL)
        .min_by(|&(a, &va), &(b, &vb)| {
            model
                .priority(a)
                .cmp(&model.priority(b))
                .then((va - 0.5).abs().total_cmp(&(vb - 0.5).abs()))
                .then(a.cmp(&b))
        })
        .map(|(v, _)| v)
}

fn relax(model: &LpModel, fixings: &[(usize, f64)], opts: &IlpOptions) -> Result<LpSolution> {
    let mut m = model.clone();
    for &(v, x) in fixings {
        m.set_bounds(v, x, x);
    }
    let sol = solve_lp(&m, &opts.lp)?;
    if sol.status == LpStatus::IterationLimit {
        return Err(Error::IterationLimit(opts.lp.simplex.max_iterations));
    }
    Ok(sol)
}

/// Best-bound branch and bound treating every variable as binary. The
/// returned values are exactly 0 or 1; `iterations` counts the LPs solved
/// below the root.
pub fn solve_ilp(model: &LpModel, opts: &IlpOptions) -> Result<LpSolution> {
    let n = model.num_variables();
    let root = relax(model, &[], opts)?;
    if root.status == LpStatus::Infeasible {
        return Ok(LpSolution::infeasible(n, 0));
    }
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut heap = BinaryHeap::new();
    let mut next_id = 0usize;
    let mut solved = 0usize;
    heap.push(Node {
        bound: root.objective_value,
        id: next_id,
        fixings: Vec::new(),
        values: root.values,
    });
    next_id += 1;

    while let Some(node) = heap.pop() {
        if let Some((best, _)) = &incumbent {
            if node.bound <= best + PRUNE_TOL {
                continue;
            }
        }
        let Some(var) = branch_variable(model, &node.values) else {
            let values: Vec<f64> = node.values.iter().map(|v| v.round()).collect();
            let obj = model.evaluate(&values);
            if incumbent.as_ref().is_none_or(|(best, _)| obj > *best) {
                incumbent = Some((obj, values));
            }
            continue;
        };
        for x in [1.0, 0.0] {
            if solved >= opts.max_nodes {
                return Err(Error::NodeLimit(opts.max_nodes));
            }
            let mut fixings = node.fixings.clone();
            fixings.push((var, x));
            let child = relax(model, &fixings, opts)?;
            solved += 1;
            if child.status == LpStatus::Infeasible {
                continue;
            }
            if let Some((best, _)) = &incumbent {
                if child.objective_value <= best + PRUNE_TOL {
                    continue;
                }
            }
            heap.push(Node {
                bound: child.objective_value,
                id: next_id,
                fixings,
                values: child.values,
            });
            next_id += 1;
        }
    }

    Ok(match incumbent {
        Some((objective_value, values)) => LpSolution {
            status: LpStatus::Optimal,
            values,
            objective_value,
            iterations: solved,
        },
        None => LpSolution::infeasible(n, solved),
    })
}
