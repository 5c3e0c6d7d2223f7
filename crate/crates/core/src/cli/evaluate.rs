use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub removed_ids: Vec<usize>,
    pub objective: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

/// Precision and recall of `removed` against the truly dirty ids. An empty
/// removal has precision 0.
pub fn score(removed: &[usize], truth: &[usize], n: usize) -> Result<(f64, f64, f64)> {
    for &id in removed.iter().chain(truth) {
        if id >= n {
            return Err(Error::IdOutOfRange { id, n });
        }
    }
    let r: BTreeSet<usize> = removed.iter().copied().collect();
    let t: BTreeSet<usize> = truth.iter().copied().collect();
    let hit = r.intersection(&t).count() as f64;
    let p = if r.is_empty() { 0.0 } else { hit / r.len() as f64 };
    let rc = if t.is_empty() { 0.0 } else { hit / t.len() as f64 };
    let f1 = if p + rc > 0.0 { 2.0 * p * rc / (p + rc) } else { 0.0 };
    Ok((p, rc, f1))
}

pub fn evaluate(removed: &[usize], objective: f64, truth: &[usize], n: usize) -> Result<EvalReport> {
    let (precision, recall, f1) = score(removed, truth, n)?;
    let mut ids = removed.to_vec();
    ids.sort_unstable();
    ids.dedup();
    Ok(EvalReport {
        precision,
        recall,
        f1,
        removed_ids: ids,
        objective,
        wall_time_ms: None,
    })
}

/// One id per line; blank lines and `#` comments are ignored.
pub fn parse_truth(text: &str) -> Result<Vec<usize>> {
    let mut ids = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        ids.push(
            body.parse()
                .map_err(|_| Error::Config(format!("truth file line {}: `{body}` is not a tuple id", no + 1)))?,
        );
    }
    Ok(ids)
}

pub fn format_truth(ids: &[usize]) -> String {
    let mut out = String::from("# dirty tuple ids\n");
    for id in ids {
        out.push_str(&format!("{id}\n"));
    }
    out
}
