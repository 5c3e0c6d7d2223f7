use std::collections::{BTreeSet, HashMap};

use super::parse::{DenialConstraint, Operator, Predicate};
use crate::relation::{Instance, Value};

fn holds(inst: &Instance, p: &Predicate, i: usize, l: usize) -> bool {
    match (inst.value(i, p.left_attr), inst.value(l, p.right_attr)) {
        (Value::Num(a), Value::Num(b)) => match p.op {
            Operator::Eq => a == b,
            Operator::Ne => a != b,
            Operator::Gt => a > b,
            Operator::Ge => a >= b,
            Operator::Lt => a < b,
            Operator::Le => a <= b,
        },
        (Value::Text(a), Value::Text(b)) => match p.op {
            Operator::Eq => a == b,
            Operator::Ne => a != b,
            // rejected at parse time
            _ => false,
        },
        _ => p.op == Operator::Ne,
    }
}

/// True iff `(t_i, t_l)` satisfies every predicate of `dc` with `t1 := t_i`,
/// `t2 := t_l`, i.e. the ordered pair violates the constraint.
pub fn violates(dc: &DenialConstraint, inst: &Instance, i: usize, l: usize) -> bool {
    i != l && dc.predicates().iter().all(|p| holds(inst, p, i, l))
}

/// Undirected conflict graph over tuple ids `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConflictGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    conflict_set: Vec<usize>,
    in_conflict: Vec<bool>,
}

impl ConflictGraph {
    /// Builds a graph from arbitrary pairs; self-loops are dropped and
    /// duplicates collapse.
    pub fn from_edges(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<(usize, usize)> = pairs
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .inspect(|&(_, b)| assert!(b < n, "edge endpoint {b} out of range (n = {n})"))
            .collect();
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let in_conflict: Vec<bool> = adjacency.iter().map(|a| !a.is_empty()).collect();
        let conflict_set = (0..n).filter(|&i| in_conflict[i]).collect();
        ConflictGraph {
            n,
            edges,
            adjacency,
            conflict_set,
            in_conflict,
        }
    }

    pub fn num_tuples(&self) -> usize {
        self.n
    }

    /// Edges `(i, l)` with `i < l`, in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Ascending neighbour ids of `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn adjacent(&self, i: usize, l: usize) -> bool {
        self.adjacency[i].binary_search(&l).is_ok()
    }

    /// The conflict tuple set `I_C`, ascending.
    pub fn conflict_set(&self) -> &[usize] {
        &self.conflict_set
    }

    pub fn in_conflict(&self, i: usize) -> bool {
        self.in_conflict[i]
    }

    pub fn is_conflict_free(&self) -> bool {
        self.edges.is_empty()
    }
}

type BlockKey<'a> = Vec<KeyPart<'a>>;

#[derive(Debug, PartialEq, Eq, Hash)]
enum KeyPart<'a> {
    Num(u64),
    Text(&'a str),
}

fn key_part(v: &Value) -> KeyPart<'_> {
    match v {
        // +0.0 and -0.0 compare equal
        Value::Num(x) => KeyPart::Num(if *x == 0.0 { 0 } else { x.to_bits() }),
        Value::Text(s) => KeyPart::Text(s),
    }
}

/// Ordered pairs `(i, l)` violating `dc`. Constraints with equality
/// predicates are evaluated only within hash blocks of equal keys.
fn violating_pairs(inst: &Instance, dc: &DenialConstraint, out: &mut Vec<(usize, usize)>) {
    let n = inst.len();
    let eq: Vec<&Predicate> = dc.predicates().iter().filter(|p| p.op == Operator::Eq).collect();
    if eq.is_empty() {
        for i in 0..n {
            for l in 0..n {
                if violates(dc, inst, i, l) {
                    out.push((i, l));
                }
            }
        }
        return;
    }
    let mut blocks: HashMap<BlockKey<'_>, Vec<usize>> = HashMap::new();
    for l in 0..n {
        let key = eq.iter().map(|p| key_part(inst.value(l, p.right_attr))).collect();
        blocks.entry(key).or_default().push(l);
    }
    for i in 0..n {
        let key: BlockKey<'_> = eq.iter().map(|p| key_part(inst.value(i, p.left_attr))).collect();
        if let Some(block) = blocks.get(&key) {
            for &l in block {
                if violates(dc, inst, i, l) {
                    out.push((i, l));
                }
            }
        }
    }
}

/// Edge `(i, l)` is present iff some constraint is violated by `(i, l)` or by
/// `(l, i)`.
pub fn detect_conflicts(inst: &Instance, dcs: &[DenialConstraint]) -> ConflictGraph {
    let mut pairs = Vec::new();
    for dc in dcs {
        violating_pairs(inst, dc, &mut pairs);
    }
    ConflictGraph::from_edges(inst.len(), pairs)
}
