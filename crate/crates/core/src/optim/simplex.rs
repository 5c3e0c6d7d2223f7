//! Dense two-phase primal simplex with bounded variables.
//!
//! Structural variables live in `[lower, upper]` and are shifted to
//! `[0, upper - lower]`. Each `≤` row gets a slack; rows whose shifted rhs
//! is negative also get an artificial that phase one drives to zero.
//! Pricing is Dantzig's rule until a run of degenerate pivots, then Bland's
//! rule for the rest of the phase. Ratio-test ties go to the lowest column.

use super::model::{LpModel, LpSolution, LpStatus};
use crate::error::{Error, Result};

const COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;
const TIE_TOL: f64 = 1e-12;
const SNAP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iterations: 50_000,
            bland_after: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum State {
    Basic,
    Lower,
    Upper,
}

struct Tableau {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<State>,
    ub: Vec<f64>,
    d: Vec<f64>,
    iterations: usize,
}

enum PhaseEnd {
    Optimal,
    Limit,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.cols + c]
    }

    fn reprice(&mut self, cost: &[f64]) {
        self.d = cost.to_vec();
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.a[r * self.cols..(r + 1) * self.cols];
                for (dj, &arj) in self.d.iter_mut().zip(row) {
                    *dj -= cb * arj;
                }
            }
        }
        for r in 0..self.rows {
            self.d[self.basis[r]] = 0.0;
        }
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols {
            let gain = match self.state[j] {
                State::Lower if self.ub[j] > 0.0 => self.d[j],
                State::Upper => -self.d[j],
                _ => continue,
            };
            if gain > COST_TOL {
                if bland {
                    return Some(j);
                }
                if best.is_none_or(|(_, g)| gain > g) {
                    best = Some((j, gain));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let cols = self.cols;
        let inv = 1.0 / self.at(p, q);
        for v in &mut self.a[p * cols..(p + 1) * cols] {
            *v *= inv;
        }
        let (before, rest) = self.a.split_at_mut(p * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for row in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
            let f = row[q];
            if f != 0.0 {
                for (x, &y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[q] = 0.0;
            }
        }
        let f = self.d[q];
        if f != 0.0 {
            for (x, &y) in self.d.iter_mut().zip(prow.iter()) {
                *x -= f * y;
            }
            self.d[q] = 0.0;
        }
    }

    fn run(&mut self, cost: &[f64], opts: &SimplexOptions) -> Result<PhaseEnd> {
        self.reprice(cost);
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            let Some(q) = self.entering(bland) else {
                return Ok(PhaseEnd::Optimal);
            };
            if self.iterations >= opts.max_iterations {
                return Ok(PhaseEnd::Limit);
            }
            self.iterations += 1;
            let delta = if self.state[q] == State::Lower { 1.0 } else { -1.0 };

            // (step, leaving column, row or None for a bound flip)
            let mut best: Option<(f64, usize, Option<usize>)> = None;
            let mut offer = |t: f64, col: usize, row: Option<usize>| {
                let better = match best {
                    None => true,
                    Some((bt, bc, _)) => t < bt - TIE_TOL || (t <= bt + TIE_TOL && col < bc),
                };
                if better {
                    best = Some((t, col, row));
                }
            };
            if self.ub[q].is_finite() {
                offer(self.ub[q], q, None);
            }
            for r in 0..self.rows {
                let alpha = delta * self.at(r, q);
                let b = self.basis[r];
                if alpha > PIVOT_TOL {
                    offer(self.beta[r].max(0.0) / alpha, b, Some(r));
                } else if alpha < -PIVOT_TOL && self.ub[b].is_finite() {
                    offer((self.ub[b] - self.beta[r]).max(0.0) / -alpha, b, Some(r));
                }
            }
            let Some((t, _, row)) = best else {
                return Err(Error::Unbounded);
            };

            if t <= TIE_TOL {
                degenerate += 1;
                if degenerate > opts.bland_after {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }

            for r in 0..self.rows {
                let alpha = self.at(r, q);
                if alpha != 0.0 {
                    self.beta[r] -= delta * t * alpha;
                }
            }
            match row {
                None => {
                    self.state[q] = if delta > 0.0 { State::Upper } else { State::Lower };
                }
                Some(p) => {
                    let leaving = self.basis[p];
                    let decreasing = delta * self.at(p, q) > 0.0;
                    self.state[leaving] = if decreasing { State::Lower } else { State::Upper };
                    let start = if delta > 0.0 { 0.0 } else { self.ub[q] };
                    self.beta[p] = start + delta * t;
                    self.state[q] = State::Basic;
                    self.basis[p] = q;
                    self.pivot(p, q);
                }
            }
        }
    }

    fn value(&self, c: usize) -> f64 {
        match self.state[c] {
            State::Lower => 0.0,
            State::Upper => self.ub[c],
            State::Basic => {
                let r = self.basis.iter().position(|&b| b == c).expect("basic column has a row");
                self.beta[r]
            }
        }
    }
}

/// Solves the LP relaxation of `model` (every variable continuous within
/// its bounds). Returns `Infeasible` and `IterationLimit` as statuses;
/// `Err` only for an unbounded model.
pub fn solve_dense(model: &LpModel, opts: &SimplexOptions) -> Result<LpSolution> {
    let n = model.num_variables();
    let m = model.num_rows();
    let lo = model.lower();
    let hi = model.upper();
    if (0..n).any(|v| hi[v] < lo[v]) {
        return Ok(LpSolution::infeasible(n, 0));
    }
    let shifted_rhs: Vec<f64> = model
        .rows()
        .iter()
        .map(|r| r.rhs - r.coeffs.iter().map(|&(v, c)| c * lo[v]).sum::<f64>())
        .collect();
    let art_rows: Vec<usize> = (0..m).filter(|&r| shifted_rhs[r] < 0.0).collect();
    let cols = n + m + art_rows.len();

    let mut a = vec![0.0; m * cols];
    let mut beta = vec![0.0; m];
    let mut basis = vec![0; m];
    let mut state = vec![State::Lower; cols];
    let mut ub = vec![f64::INFINITY; cols];
    for v in 0..n {
        ub[v] = hi[v] - lo[v];
    }
    let mut art_of_row = vec![None; m];
    for (x, &r) in art_rows.iter().enumerate() {
        art_of_row[r] = Some(n + m + x);
    }
    for (r, row) in model.rows().iter().enumerate() {
        let sign = if art_of_row[r].is_some() { -1.0 } else { 1.0 };
        let line = &mut a[r * cols..(r + 1) * cols];
        for &(v, c) in &row.coeffs {
            line[v] = sign * c;
        }
        line[n + r] = sign;
        beta[r] = sign * shifted_rhs[r];
        match art_of_row[r] {
            Some(art) => {
                line[art] = 1.0;
                basis[r] = art;
            }
            None => basis[r] = n + r,
        }
        state[basis[r]] = State::Basic;
    }

    let mut t = Tableau {
        rows: m,
        cols,
        a,
        beta,
        basis,
        state,
        ub,
        d: vec![0.0; cols],
        iterations: 0,
    };

    if !art_rows.is_empty() {
        let mut cost = vec![0.0; cols];
        for c in &mut cost[n + m..] {
            *c = -1.0;
        }
        if let PhaseEnd::Limit = t.run(&cost, opts)? {
            return Ok(limit_solution(model, &t, lo));
        }
        let infeasibility: f64 = (n + m..cols).map(|c| t.value(c)).sum();
        if infeasibility > FEAS_TOL {
            return Ok(LpSolution::infeasible(n, t.iterations));
        }
        for c in n + m..cols {
            t.ub[c] = 0.0;
        }
        for r in 0..m {
            if t.basis[r] >= n + m {
                t.beta[r] = 0.0;
            }
        }
    }

    let mut cost = vec![0.0; cols];
    cost[..n].copy_from_slice(model.objective());
    let end = t.run(&cost, opts)?;
    let values = extract(model, &t, lo);
    let status = match end {
        PhaseEnd::Optimal => LpStatus::Optimal,
        PhaseEnd::Limit => LpStatus::IterationLimit,
    };
    Ok(LpSolution {
        status,
        objective_value: model.evaluate(&values),
        values,
        iterations: t.iterations,
    })
}

fn extract(model: &LpModel, t: &Tableau, lo: &[f64]) -> Vec<f64> {
    let hi = model.upper();
    let mut values = vec![0.0; model.num_variables()];
    for (c, s) in t.state.iter().enumerate().take(values.len()) {
        values[c] = match s {
            State::Lower => lo[c],
            State::Upper => hi[c],
            State::Basic => f64::NAN,
        };
    }
    for (r, &b) in t.basis.iter().enumerate() {
        if b < values.len() {
            values[b] = lo[b] + t.beta[r];
        }
    }
    for (v, x) in values.iter_mut().enumerate() {
        if (*x - lo[v]).abs() < SNAP_TOL {
            *x = lo[v];
        } else if (*x - hi[v]).abs() < SNAP_TOL {
            *x = hi[v];
        }
    }
    values
}

fn limit_solution(model: &LpModel, t: &Tableau, lo: &[f64]) -> LpSolution {
    let values = extract(model, t, lo);
    LpSolution {
        status: LpStatus::IterationLimit,
        objective_value: model.evaluate(&values),
        values,
        iterations: t.iterations,
    }
}
