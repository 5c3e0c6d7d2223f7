use std::io::Write;

use serde::Serialize;

/// A maximization LP over bounded variables with `≤` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    names: Vec<String>,
    objective: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Lower values branch first.
    priority: Vec<u8>,
    rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    /// Simplex pivots (LP) or nodes explored (ILP).
    pub iterations: usize,
}

impl LpSolution {
    pub(crate) fn infeasible(n: usize, iterations: usize) -> Self {
        LpSolution {
            status: LpStatus::Infeasible,
            values: vec![0.0; n],
            objective_value: f64::NEG_INFINITY,
            iterations,
        }
    }
}

impl Default for LpModel {
    fn default() -> Self {
        Self::new()
    }
}

impl LpModel {
    pub fn new() -> Self {
        LpModel {
            names: Vec::new(),
            objective: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            priority: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Adds a `[0, 1]` variable and returns its index.
    pub fn add_variable(&mut self, name: impl Into<String>, objective: f64) -> usize {
        self.add_variable_with_priority(name, objective, 0)
    }

    pub fn add_variable_with_priority(&mut self, name: impl Into<String>, objective: f64, priority: u8) -> usize {
        self.names.push(name.into());
        self.objective.push(objective);
        self.lower.push(0.0);
        self.upper.push(1.0);
        self.priority.push(priority);
        self.names.len() - 1
    }

    /// Adds `Σ coeff·x ≤ rhs`. Repeated indices are summed, zeros dropped.
    pub fn add_row(&mut self, coeffs: impl IntoIterator<Item = (usize, f64)>, rhs: f64) {
        assert!(rhs.is_finite(), "row rhs must be finite");
        let mut cs: Vec<(usize, f64)> = coeffs.into_iter().collect();
        cs.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(cs.len());
        for (v, c) in cs {
            assert!(v < self.names.len(), "row references undeclared variable {v}");
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        self.rows.push(Row { coeffs: merged, rhs });
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn num_variables(&self) -> usize {
        self.names.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn priority(&self, var: usize) -> u8 {
        self.priority[var]
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn evaluate(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, v)| c * v).sum()
    }

    /// Largest bound or row violation of `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let bounds = values
            .iter()
            .enumerate()
            .map(|(v, &x)| (self.lower[v] - x).max(x - self.upper[v]).max(0.0));
        let rows = self
            .rows
            .iter()
            .map(|r| (r.coeffs.iter().map(|&(v, c)| c * values[v]).sum::<f64>() - r.rhs).max(0.0));
        bounds.chain(rows).fold(0.0, f64::max)
    }

    /// Writes the model in CPLEX LP format.
    pub fn write_lp<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        fn term(out: &mut String, first: bool, c: f64, name: &str) {
            if c < 0.0 {
                out.push_str(if first { "- " } else { " - " });
            } else if !first {
                out.push_str(" + ");
            }
            out.push_str(&format!("{} {name}", c.abs()));
        }
        writeln!(w, "\\ osrepair model")?;
        writeln!(w, "Maximize")?;
        let mut obj = String::from(" obj: ");
        let mut first = true;
        for (v, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                term(&mut obj, first, c, &self.names[v]);
                first = false;
            }
        }
        if first {
            obj.push('0');
        }
        writeln!(w, "{obj}")?;
        writeln!(w, "Subject To")?;
        for (r, row) in self.rows.iter().enumerate() {
            let mut line = format!(" c{r}: ");
            if row.coeffs.is_empty() {
                line.push('0');
            }
            for (x, &(v, c)) in row.coeffs.iter().enumerate() {
                term(&mut line, x == 0, c, &self.names[v]);
            }
            writeln!(w, "{line} <= {}", row.rhs)?;
        }
        writeln!(w, "Bounds")?;
        for v in 0..self.names.len() {
            writeln!(w, " {} <= {} <= {}", self.lower[v], self.names[v], self.upper[v])?;
        }
        writeln!(w, "End")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionClass {
    Integral,
    HalfIntegral,
    Other,
}

/// Classifies a solution vector by its value set.
pub fn classify_solution(sol: &LpSolution, eps: f64) -> SolutionClass {
    classify_values(&sol.values, eps)
}

pub fn classify_values(values: &[f64], eps: f64) -> SolutionClass {
    let near = |v: f64, t: f64| (v - t).abs() <= eps;
    let mut half = false;
    for &v in values {
        if near(v, 0.0) || near(v, 1.0) {
            continue;
        }
        if near(v, 0.5) {
            half = true;
        } else {
            return SolutionClass::Other;
        }
    }
    if half {
        SolutionClass::HalfIntegral
    } else {
        SolutionClass::Integral
    }
}
