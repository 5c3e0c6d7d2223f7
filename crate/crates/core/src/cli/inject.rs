use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::{AttributeKind, Instance, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    /// One character inserted, deleted or replaced in a categorical cell.
    Typo,
    /// The cell takes another tuple's value.
    Duplicate,
    /// A categorical cell gets a token from outside the column's domain.
    Bogus,
    /// A numeric cell jumps to `observed_max · (1 + u)`, `u ∈ [1, 3]`.
    Outlier,
}

impl ErrorKind {
    pub const ALL: [ErrorKind; 4] = [
        ErrorKind::Typo,
        ErrorKind::Duplicate,
        ErrorKind::Bogus,
        ErrorKind::Outlier,
    ];

    fn applies_to(self, kind: AttributeKind) -> bool {
        match self {
            ErrorKind::Typo | ErrorKind::Bogus => kind == AttributeKind::Categorical,
            ErrorKind::Outlier => kind == AttributeKind::Numeric,
            ErrorKind::Duplicate => true,
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Typo => "typo",
            ErrorKind::Duplicate => "duplicate",
            ErrorKind::Bogus => "bogus",
            ErrorKind::Outlier => "outlier",
        })
    }
}

impl FromStr for ErrorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ErrorKind::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown error kind `{s}`")))
    }
}

/// Parses a comma-separated kind list; `all` selects every kind.
pub fn parse_kinds(text: &str) -> Result<Vec<ErrorKind>> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(ErrorKind::ALL.to_vec());
    }
    let mut kinds: Vec<ErrorKind> = text.split(',').map(str::parse).collect::<Result<_>>()?;
    kinds.sort_unstable();
    kinds.dedup();
    Ok(kinds)
}

#[derive(Debug, Clone)]
pub struct Injection {
    pub instance: Instance,
    /// Corrupted tuple ids, ascending.
    pub dirty: Vec<usize>,
    /// `(tuple, attribute, kind)` per corruption.
    pub cells: Vec<(usize, usize, ErrorKind)>,
}

pub fn outlier_value(observed_max: f64, u: f64) -> f64 {
    observed_max * (1.0 + u)
}

fn typo(rng: &mut ChaCha8Rng, s: &str) -> String {
    let mut chars: Vec<char> = s.chars().collect();
    let letter = |rng: &mut ChaCha8Rng| (b'a' + rng.random_range(0..26u8)) as char;
    match if chars.len() > 1 {
        rng.random_range(0..3)
    } else {
        rng.random_range(0..2)
    } {
        0 => {
            let at = rng.random_range(0..=chars.len());
            chars.insert(at, letter(rng));
        }
        1 if !chars.is_empty() => {
            let at = rng.random_range(0..chars.len());
            let mut c = letter(rng);
            while c == chars[at] {
                c = letter(rng);
            }
            chars[at] = c;
        }
        1 => chars.push(letter(rng)),
        _ => {
            let at = rng.random_range(0..chars.len());
            chars.remove(at);
        }
    }
    chars.into_iter().collect()
}

/// Corrupts one cell in each of `⌈rate · n⌉` distinct tuples.
pub fn inject(inst: &Instance, rate: f64, kinds: &[ErrorKind], seed: u64) -> Result<Injection> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::Config(format!("error rate must lie in (0, 1), got {rate}")));
    }
    if kinds.is_empty() {
        return Err(Error::Config("at least one error kind is required".into()));
    }
    let n = inst.len();
    let count = (rate * n as f64).ceil() as usize;
    if count == 0 {
        return Err(Error::Config("error rate selects no tuples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut rng);
    ids.truncate(count);
    ids.sort_unstable();

    let schema = inst.schema();
    let mut rows: Vec<Vec<Value>> = inst.tuples().iter().map(|t| t.values.clone()).collect();
    let domains: Vec<HashSet<String>> = (0..schema.len())
        .map(|j| rows.iter().map(|r| r[j].to_string()).collect())
        .collect();
    let mut cells = Vec::with_capacity(count);
    let mut bogus_counter = 0usize;
    for &i in &ids {
        let options: Vec<(ErrorKind, usize)> = kinds
            .iter()
            .flat_map(|&k| (0..schema.len()).map(move |j| (k, j)))
            .filter(|&(k, j)| k.applies_to(schema[j].kind))
            .filter(|&(k, j)| k != ErrorKind::Duplicate || (0..n).any(|s| inst.value(s, j) != inst.value(i, j)))
            .collect();
        let &(kind, j) = options
            .choose(&mut rng)
            .ok_or_else(|| Error::Config(format!("no requested error kind applies to tuple {i}")))?;
        rows[i][j] = match kind {
            ErrorKind::Typo => Value::Text(typo(&mut rng, inst.value(i, j).as_text().unwrap_or_default())),
            ErrorKind::Duplicate => {
                let donors: Vec<usize> = (0..n).filter(|&s| inst.value(s, j) != inst.value(i, j)).collect();
                inst.value(*donors.choose(&mut rng).expect("filtered above"), j).clone()
            }
            ErrorKind::Bogus => loop {
                bogus_counter += 1;
                let token = format!("#ERR{bogus_counter:03}");
                if !domains[j].contains(&token) {
                    break Value::Text(token);
                }
            },
            ErrorKind::Outlier => {
                let u = rng.random_range(1.0..=3.0);
                let max = schema[j].observed_max;
                let base = if max > 0.0 {
                    max
                } else {
                    schema[j].range().max(1.0) + max.abs()
                };
                Value::Num(outlier_value(base, u))
            }
        };
        cells.push((i, j, kind));
    }
    let columns = schema.iter().map(|a| (a.name.clone(), a.kind)).collect();
    Ok(Injection {
        instance: Instance::new(columns, rows)?,
        dirty: ids,
        cells,
    })
}
