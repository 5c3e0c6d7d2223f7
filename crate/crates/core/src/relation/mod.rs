//! Relational instances and the value/tuple distances everything else is
//! built on.
//!
//! Numeric attributes are min-max normalized over the observed column, so a
//! numeric distance is `|a - b| / (max - min)` (0 for a constant column).
//! Categorical attributes use the Levenshtein distance divided by the longer
//! of the two strings. Every value distance therefore lies in `[0, 1]`.

mod csvio;
pub mod edit;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

pub use csvio::{load_csv, parse_schema_hint, read_csv, write_csv, write_schema_hint, LoadOptions, SchemaHint};

use crate::error::{Error, Result};

/// Dictionaries up to this size get a lazily built pairwise distance table.
const DENSE_DICT_LIMIT: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Numeric,
    Categorical,
}

impl fmt::Display for AttributeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeKind::Numeric => f.write_str("numeric"),
            AttributeKind::Categorical => f.write_str("categorical"),
        }
    }
}

/// Column statistics. `observed_min`/`observed_max` are meaningful for
/// numeric columns only, `max_len` for categorical columns only.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeMeta {
    pub name: String,
    pub kind: AttributeKind,
    pub observed_min: f64,
    pub observed_max: f64,
    pub max_len: usize,
}

impl AttributeMeta {
    pub fn range(&self) -> f64 {
        self.observed_max - self.observed_min
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl Value {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Value::Num(v) => Some(*v),
            Value::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            Value::Num(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => write!(f, "{v}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tuple {
    pub id: usize,
    pub values: Vec<Value>,
}

/// Interned strings of one categorical column.
#[derive(Debug, Default)]
struct Dictionary {
    entries: Vec<Vec<char>>,
    table: OnceLock<Vec<f64>>,
}

impl Dictionary {
    fn distance(&self, a: u32, b: u32) -> f64 {
        if a == b {
            return 0.0;
        }
        let k = self.entries.len();
        if k <= DENSE_DICT_LIMIT {
            let table = self.table.get_or_init(|| {
                let mut t = vec![0.0; k * k];
                for x in 0..k {
                    for y in (x + 1)..k {
                        let d = edit::normalized_levenshtein(&self.entries[x], &self.entries[y]);
                        t[x * k + y] = d;
                        t[y * k + x] = d;
                    }
                }
                t
            });
            table[a as usize * k + b as usize]
        } else {
            edit::normalized_levenshtein(&self.entries[a as usize], &self.entries[b as usize])
        }
    }
}

/// A relation instance over a fixed schema. Immutable once built; all
/// distance queries are pure and may be issued from many threads.
#[derive(Debug)]
pub struct Instance {
    schema: Vec<AttributeMeta>,
    tuples: Vec<Tuple>,
    // Column-major caches: normalized numeric values, or dictionary codes.
    numeric: Vec<Vec<f64>>,
    codes: Vec<Vec<u32>>,
    dicts: Vec<Dictionary>,
}

impl Clone for Instance {
    fn clone(&self) -> Self {
        let columns = self.schema.iter().map(|a| (a.name.clone(), a.kind)).collect();
        let rows = self.tuples.iter().map(|t| t.values.clone()).collect();
        Instance::new(columns, rows).expect("cloning a valid instance")
    }
}

impl Instance {
    /// Builds an instance from typed rows. Column statistics are computed
    /// from the data; tuple ids are assigned `0..n` in row order.
    pub fn new(columns: Vec<(String, AttributeKind)>, rows: Vec<Vec<Value>>) -> Result<Self> {
        let m = columns.len();
        if m == 0 {
            return Err(Error::InvalidInstance("schema has no attributes".into()));
        }
        let mut schema: Vec<AttributeMeta> = columns
            .into_iter()
            .map(|(name, kind)| AttributeMeta {
                name,
                kind,
                observed_min: 0.0,
                observed_max: 0.0,
                max_len: 0,
            })
            .collect();

        let n = rows.len();
        let mut numeric = vec![Vec::new(); m];
        let mut codes = vec![Vec::new(); m];
        let mut dicts: Vec<Dictionary> = (0..m).map(|_| Dictionary::default()).collect();

        for (j, meta) in schema.iter_mut().enumerate() {
            match meta.kind {
                AttributeKind::Numeric => {
                    let mut col = Vec::with_capacity(n);
                    for (i, row) in rows.iter().enumerate() {
                        if row.len() != m {
                            return Err(Error::InvalidInstance(format!(
                                "tuple {i} has {} values, schema has {m}",
                                row.len()
                            )));
                        }
                        let v = row[j].as_num().ok_or_else(|| {
                            Error::InvalidInstance(format!(
                                "tuple {i}: `{}` expects a number, got `{}`",
                                meta.name, row[j]
                            ))
                        })?;
                        if !v.is_finite() {
                            return Err(Error::InvalidInstance(format!(
                                "tuple {i}: non-finite value in `{}`",
                                meta.name
                            )));
                        }
                        col.push(v);
                    }
                    let (lo, hi) = col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                        (lo.min(v), hi.max(v))
                    });
                    if n > 0 {
                        meta.observed_min = lo;
                        meta.observed_max = hi;
                    }
                    numeric[j] = col;
                }
                AttributeKind::Categorical => {
                    let mut index: HashMap<&str, u32> = HashMap::new();
                    let mut col = Vec::with_capacity(n);
                    for (i, row) in rows.iter().enumerate() {
                        if row.len() != m {
                            return Err(Error::InvalidInstance(format!(
                                "tuple {i} has {} values, schema has {m}",
                                row.len()
                            )));
                        }
                        let s = match &row[j] {
                            Value::Text(s) => s.as_str(),
                            Value::Num(_) => {
                                return Err(Error::InvalidInstance(format!(
                                    "tuple {i}: `{}` expects text",
                                    meta.name
                                )))
                            }
                        };
                        let next = index.len() as u32;
                        let code = *index.entry(s).or_insert_with(|| {
                            dicts[j].entries.push(s.chars().collect());
                            next
                        });
                        meta.max_len = meta.max_len.max(dicts[j].entries[code as usize].len());
                        col.push(code);
                    }
                    codes[j] = col;
                }
            }
        }

        let tuples = rows
            .into_iter()
            .enumerate()
            .map(|(id, values)| Tuple { id, values })
            .collect();
        Ok(Instance {
            schema,
            tuples,
            numeric,
            codes,
            dicts,
        })
    }

    pub fn schema(&self) -> &[AttributeMeta] {
        &self.schema
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn tuple(&self, id: usize) -> &Tuple {
        &self.tuples[id]
    }

    /// Number of tuples `n`.
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Number of attributes `m`.
    pub fn arity(&self) -> usize {
        self.schema.len()
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|a| a.name == name)
    }

    pub fn value(&self, i: usize, j: usize) -> &Value {
        &self.tuples[i].values[j]
    }

    /// Normalized distance between `t_i[A_j]` and `t_l[A_j]`, in `[0, 1]`.
    pub fn value_distance(&self, i: usize, l: usize, j: usize) -> f64 {
        match self.schema[j].kind {
            AttributeKind::Numeric => {
                let range = self.schema[j].range();
                if range <= 0.0 {
                    0.0
                } else {
                    ((self.numeric[j][i] - self.numeric[j][l]).abs() / range).min(1.0)
                }
            }
            AttributeKind::Categorical => self.dicts[j].distance(self.codes[j][i], self.codes[j][l]),
        }
    }

    /// All `m` attribute distances between two tuples, written into `out`.
    pub fn attribute_distances_into(&self, i: usize, l: usize, out: &mut [f64]) {
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = self.value_distance(i, l, j);
        }
    }

    pub fn attribute_distances(&self, i: usize, l: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.arity()];
        self.attribute_distances_into(i, l, &mut out);
        out
    }

    /// `[1, d_il1, ..., d_il(j-1), d_il(j+1), ..., d_ilm]`.
    pub fn distance_vector(&self, i: usize, l: usize, j: usize) -> DistanceVector {
        let mut entries = Vec::with_capacity(self.arity());
        entries.push(1.0);
        entries.extend(
            (0..self.arity())
                .filter(|&a| a != j)
                .map(|a| self.value_distance(i, l, a)),
        );
        DistanceVector(entries)
    }

    /// Sum of the attribute distances; used for nearest-neighbour search.
    pub fn tuple_distance(&self, i: usize, l: usize) -> f64 {
        (0..self.arity()).map(|j| self.value_distance(i, l, j)).sum()
    }
}

/// Regressor input for the dependency model of attribute `A_j`: a leading
/// constant 1 followed by the distances on every other attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceVector(Vec<f64>);

impl DistanceVector {
    /// Assembles a vector from the full per-attribute distances, dropping the
    /// modeled attribute `j`.
    pub fn from_distances(distances: &[f64], j: usize) -> Self {
        let mut entries = Vec::with_capacity(distances.len());
        entries.push(1.0);
        entries.extend(distances.iter().enumerate().filter(|&(a, _)| a != j).map(|(_, &d)| d));
        DistanceVector(entries)
    }

    pub fn from_entries(entries: Vec<f64>) -> Self {
        debug_assert!(entries.first() == Some(&1.0));
        DistanceVector(entries)
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn num_text(rows: &[(f64, &str)]) -> Instance {
        Instance::new(
            vec![
                ("a".into(), AttributeKind::Numeric),
                ("b".into(), AttributeKind::Categorical),
            ],
            rows.iter()
                .map(|&(a, b)| vec![Value::Num(a), Value::Text(b.into())])
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn min_max_scan() {
        let inst = num_text(&[(0.0, "x"), (200.0, "yy"), (50.0, "cat"), (150.0, "cart")]);
        let a = &inst.schema()[0];
        assert_eq!((a.observed_min, a.observed_max), (0.0, 200.0));
        assert_eq!(inst.schema()[1].max_len, 4);
    }

    #[test]
    fn numeric_and_categorical_distances() {
        let inst = num_text(&[(0.0, "x"), (200.0, "yy"), (50.0, "cat"), (150.0, "cart")]);
        assert_eq!(inst.value_distance(2, 3, 0), 0.5);
        assert_eq!(inst.value_distance(2, 3, 1), 0.25);
        assert_eq!(inst.value_distance(2, 2, 0), 0.0);
        assert_eq!(inst.value_distance(2, 2, 1), 0.0);
        assert_eq!(inst.tuple_distance(2, 3), 0.75);
        assert_eq!(inst.tuple_distance(1, 1), 0.0);
    }

    #[test]
    fn zero_range_and_empty_strings() {
        let inst = num_text(&[(7.0, ""), (7.0, "")]);
        assert_eq!(inst.value_distance(0, 1, 0), 0.0);
        assert_eq!(inst.value_distance(0, 1, 1), 0.0);
    }

    #[test]
    fn distance_vector_layout() {
        let inst = num_text(&[(0.0, "x"), (200.0, "yy"), (50.0, "cat"), (150.0, "cart")]);
        // m = 2, modeling attribute 0 leaves the single categorical distance.
        assert_eq!(inst.distance_vector(2, 3, 0).entries(), &[1.0, 0.25]);
        assert_eq!(inst.distance_vector(1, 1, 1).entries(), &[1.0, 0.0]);
    }

    #[test]
    fn distance_vector_drops_last_attribute() {
        let d = [0.352, 0.421, 0.037, 0.025, 0.032];
        let v = DistanceVector::from_distances(&d, 4);
        assert_eq!(v.entries(), &[1.0, 0.352, 0.421, 0.037, 0.025]);
    }

    fn arb_instance() -> impl Strategy<Value = Instance> {
        prop::collection::vec((-50.0f64..50.0, "[a-c]{0,4}", -1.0f64..1.0), 2..12).prop_map(|rows| {
            Instance::new(
                vec![
                    ("x".into(), AttributeKind::Numeric),
                    ("s".into(), AttributeKind::Categorical),
                    ("y".into(), AttributeKind::Numeric),
                ],
                rows.into_iter()
                    .map(|(x, s, y)| vec![Value::Num(x), Value::Text(s), Value::Num(y)])
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn distances_symmetric_and_bounded(inst in arb_instance()) {
            let n = inst.len();
            for i in 0..n {
                for l in 0..n {
                    for j in 0..inst.arity() {
                        let d = inst.value_distance(i, l, j);
                        prop_assert!((0.0..=1.0).contains(&d));
                        prop_assert_eq!(d, inst.value_distance(l, i, j));
                    }
                    for j in 0..inst.arity() {
                        let v = inst.distance_vector(i, l, j);
                        prop_assert_eq!(v.entries()[0], 1.0);
                        prop_assert_eq!(&v, &inst.distance_vector(l, i, j));
                    }
                }
                prop_assert_eq!(inst.tuple_distance(i, i), 0.0);
            }
        }

        #[test]
        fn numeric_triangle_inequality(rows in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 3..8)) {
            let inst = Instance::new(
                vec![("p".into(), AttributeKind::Numeric), ("q".into(), AttributeKind::Numeric)],
                rows.into_iter().map(|(p, q)| vec![Value::Num(p), Value::Num(q)]).collect(),
            ).unwrap();
            let n = inst.len();
            for a in 0..n { for b in 0..n { for c in 0..n {
                prop_assert!(inst.tuple_distance(a, c) <= inst.tuple_distance(a, b) + inst.tuple_distance(b, c) + 1e-12);
            }}}
        }
    }
}
