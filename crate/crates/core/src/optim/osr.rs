use super::model::LpModel;
use crate::constraints::ConflictGraph;
use crate::depmodel::ProviderWeights;

/// The repair LP together with the mapping from tuples to variables.
#[derive(Debug, Clone)]
pub struct OsrModel {
    pub model: LpModel,
    /// `x_i` for conflict tuples.
    pub x: Vec<Option<usize>>,
    /// `(i, l, var)` for every `y_il`.
    pub y: Vec<(usize, usize, usize)>,
    pub clique_rows: usize,
}

impl OsrModel {
    pub fn x_var(&self, i: usize) -> Option<usize> {
        self.x[i]
    }

    /// `x_i` read from a solution vector; clean tuples are always kept.
    pub fn x_value(&self, values: &[f64], i: usize) -> f64 {
        self.x[i].map_or(1.0, |v| values[v])
    }
}

/// Builds the OSR program. `x_i` keeps conflict tuple `t_i`; `y_il` says
/// `t_l` is one of `t_i`'s top-`k` providers. Cliques of size three or more
/// become `Σ x ≤ 1` rows; smaller ones are already covered by edge rows.
pub fn build_osr_model(weights: &ProviderWeights, graph: &ConflictGraph, cliques: &[Vec<usize>]) -> OsrModel {
    let n = weights.num_tuples();
    let k = weights.k() as f64;
    let mut model = LpModel::new();
    let mut x = vec![None; n];
    for &i in graph.conflict_set() {
        x[i] = Some(model.add_variable_with_priority(format!("x_{i}"), 0.0, 0));
    }
    let mut y = Vec::new();
    let mut per_tuple: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, vars) in per_tuple.iter_mut().enumerate() {
        for &l in weights.candidates(i) {
            let v = model.add_variable_with_priority(format!("y_{i}_{l}"), weights.value(i, l), 1);
            y.push((i, l, v));
            vars.push(v);
        }
    }

    for &(a, b) in graph.edges() {
        model.add_row([(x[a].unwrap(), 1.0), (x[b].unwrap(), 1.0)], 1.0);
    }
    for &(i, l, v) in &y {
        if let Some(xi) = x[i] {
            model.add_row([(v, 1.0), (xi, -1.0)], 0.0);
        }
        if let Some(xl) = x[l] {
            model.add_row([(v, 1.0), (xl, -1.0)], 0.0);
        }
    }
    for (i, vars) in per_tuple.iter().enumerate() {
        if vars.is_empty() {
            continue;
        }
        let sum = vars.iter().map(|&v| (v, 1.0));
        match x[i] {
            Some(xi) => model.add_row(sum.chain([(xi, -k)]), 0.0),
            None => model.add_row(sum, k),
        }
    }
    let mut clique_rows = 0;
    for q in cliques.iter().filter(|q| q.len() > 2) {
        let row: Vec<(usize, f64)> = q
            .iter()
            .map(|&i| (x[i].expect("clique members are conflict tuples"), 1.0))
            .collect();
        model.add_row(row, 1.0);
        clique_rows += 1;
    }
    OsrModel {
        model,
        x,
        y,
        clique_rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, k: usize, graph: &ConflictGraph) -> ProviderWeights {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for l in 0..n {
                if i != l {
                    values[i * n + l] = 1.0 + ((i * 7 + l * 3) % 5) as f64 * 0.1;
                }
            }
        }
        ProviderWeights::from_matrix(n, k, values, graph)
    }

    #[test]
    fn conflict_free_has_no_x() {
        let g = ConflictGraph::from_edges(4, []);
        let w = uniform(4, 2, &g);
        let m = build_osr_model(&w, &g, &[]);
        assert!(m.x.iter().all(Option::is_none));
        assert_eq!(m.y.len(), 8);
        let s = crate::optim::solve_lp(&m.model, &Default::default()).unwrap();
        let want: f64 = (0..4).map(|i| w.tuple_value(i)).sum();
        assert!((s.objective_value - want).abs() < 1e-9);
    }

    #[test]
    fn single_edge_single_row() {
        let g = ConflictGraph::from_edges(4, [(1, 2)]);
        let m = build_osr_model(&uniform(4, 2, &g), &g, &[]);
        let xs = (m.x[1].unwrap(), m.x[2].unwrap());
        let edge_rows = m
            .model
            .rows()
            .iter()
            .filter(|r| r.coeffs == vec![(xs.0, 1.0), (xs.1, 1.0)] && r.rhs == 1.0)
            .count();
        assert_eq!(edge_rows, 1);
    }

    #[test]
    fn clique_row() {
        let g = ConflictGraph::from_edges(5, [(0, 1), (0, 2), (1, 2)]);
        let w = uniform(5, 2, &g);
        let base = build_osr_model(&w, &g, &[]);
        let with = build_osr_model(&w, &g, &[vec![0, 1, 2], vec![0, 1]]);
        assert_eq!(with.model.num_rows(), base.model.num_rows() + 1);
        assert_eq!(with.clique_rows, 1);
        let last = with.model.rows().last().unwrap();
        assert_eq!(last.coeffs.len(), 3);
        assert!(last.coeffs.iter().all(|&(_, c)| c == 1.0));
        assert_eq!(last.rhs, 1.0);
    }
}
