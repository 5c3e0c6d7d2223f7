//! Seeded synthetic relations with planted dependencies and controllable
//! conflict shapes, used by the examples, the benchmarks and the test suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::{parse_dc, DenialConstraint};
use crate::relation::{AttributeKind, Instance, Value};

/// A generated relation with its constraints. `dirty` lists the tuples the
/// generator perturbed, when it knows.
#[derive(Debug, Clone)]
pub struct Synthetic {
    pub instance: Instance,
    pub constraints: Vec<DenialConstraint>,
    pub dirty: Vec<usize>,
}

/// Two functional dependencies `Key1 → Val1`, `Key2 → Val2`.
pub const KEYED_CONSTRAINTS: [&str; 2] = [
    "!(t1.Key1 == t2.Key1 & t1.Val1 != t2.Val1)",
    "!(t1.Key2 == t2.Key2 & t1.Val2 != t2.Val2)",
];

const OFFSETS: [f64; 4] = [0.0, 7.0, 15.0, 24.0];

#[derive(Debug, Clone)]
struct KeyedRow {
    key1: String,
    var1: usize,
    key2: String,
    var2: usize,
    x: f64,
    y: f64,
}

fn keyed_schema() -> Vec<(String, AttributeKind)> {
    [
        ("Key1", AttributeKind::Categorical),
        ("Val1", AttributeKind::Numeric),
        ("Key2", AttributeKind::Categorical),
        ("Val2", AttributeKind::Numeric),
        ("X", AttributeKind::Numeric),
        ("Y", AttributeKind::Numeric),
    ]
    .into_iter()
    .map(|(n, k)| (n.to_string(), k))
    .collect()
}

fn clean_row(rng: &mut ChaCha8Rng, id: usize) -> KeyedRow {
    let x: f64 = rng.random_range(0.0..100.0);
    KeyedRow {
        key1: format!("a{id}"),
        var1: 0,
        key2: format!("b{id}"),
        var2: 0,
        x,
        y: 2.0 * x + 10.0 + rng.random_range(-2.0..2.0),
    }
}

/// `Val1 = X/2`, `Val2 = Y/4`, shifted by the variant offset; variant 0 is
/// the consistent value. Non-zero variants also disturb `Y`.
fn build_keyed(rows: &[KeyedRow]) -> Synthetic {
    let round = |v: f64| (v * 100.0).round() / 100.0;
    let values = rows
        .iter()
        .map(|r| {
            vec![
                Value::Text(r.key1.clone()),
                Value::Num(round(r.x / 2.0 + OFFSETS[r.var1])),
                Value::Text(r.key2.clone()),
                Value::Num(round(r.y / 4.0 + OFFSETS[r.var2])),
                Value::Num(round(r.x)),
                Value::Num(round(r.y)),
            ]
        })
        .collect();
    let instance = Instance::new(keyed_schema(), values).expect("generated rows match the schema");
    let constraints = KEYED_CONSTRAINTS
        .iter()
        .map(|t| parse_dc(t, instance.schema()).expect("built-in constraint parses"))
        .collect();
    let dirty = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.var1 != 0 || r.var2 != 0)
        .map(|(i, _)| i)
        .collect();
    Synthetic {
        instance,
        constraints,
        dirty,
    }
}

fn disturb(rng: &mut ChaCha8Rng, r: &mut KeyedRow) {
    if r.var1 != 0 || r.var2 != 0 {
        r.y += rng.random_range(15.0..60.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    }
}

/// A small relation of `n` tuples in which at most `max_conflict` tuples can
/// conflict. Conflict candidates share a few keys with random variants, so
/// the conflict graph is a union of complete multipartite pieces: edges,
/// paths, triangles, larger cliques and overlaps between them.
pub fn random_small(seed: u64, n: usize, max_conflict: usize) -> Synthetic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = max_conflict.min(n);
    let mut rows: Vec<KeyedRow> = (0..n).map(|i| clean_row(&mut rng, i)).collect();
    let mut candidates: Vec<usize> = (0..n).collect();
    candidates.shuffle(&mut rng);
    candidates.truncate(c);
    for &i in &candidates {
        let r = &mut rows[i];
        if rng.random_bool(0.75) {
            r.key1 = format!("g{}", rng.random_range(0..3));
            r.var1 = rng.random_range(0..3);
        }
        if rng.random_bool(0.5) {
            r.key2 = format!("h{}", rng.random_range(0..2));
            r.var2 = rng.random_range(0..2);
        }
        disturb(&mut rng, r);
    }
    build_keyed(&rows)
}

/// Disjoint chains (paths) and cliques plus `clean` unconstrained tuples.
/// A chain of length `s` alternates shared `Key1` and `Key2` pairs; a clique
/// of size `s` shares one `Key1` with `s` distinct variants.
pub fn chains_and_cliques(seed: u64, chains: &[usize], cliques: &[usize], clean: usize) -> Synthetic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<KeyedRow> = Vec::new();
    for (c, &len) in chains.iter().enumerate() {
        let start = rows.len();
        for j in 0..len {
            let id = rows.len();
            rows.push(clean_row(&mut rng, id));
            if j > 0 {
                let (a, b) = (start + j - 1, start + j);
                if (j - 1) % 2 == 0 {
                    let key = format!("p{c}_{j}");
                    rows[a].key1 = key.clone();
                    rows[b].key1 = key;
                    rows[b].var1 = 1;
                } else {
                    let key = format!("r{c}_{j}");
                    rows[a].key2 = key.clone();
                    rows[b].key2 = key;
                    rows[b].var2 = 1;
                }
            }
        }
    }
    for (c, &size) in cliques.iter().enumerate() {
        for v in 0..size {
            let id = rows.len();
            let mut r = clean_row(&mut rng, id);
            r.key1 = format!("q{c}");
            r.var1 = v % OFFSETS.len();
            if v >= OFFSETS.len() {
                // keep variants distinct beyond the offset table
                r.x += 100.0 * v as f64;
            }
            rows.push(r);
        }
    }
    for _ in 0..clean {
        let id = rows.len();
        rows.push(clean_row(&mut rng, id));
    }
    for r in &mut rows {
        disturb(&mut rng, r);
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(&mut rng);
    let shuffled: Vec<KeyedRow> = order.iter().map(|&i| rows[i].clone()).collect();
    build_keyed(&shuffled)
}

/// FD-style constraints on a billing relation: a zip code determines city
/// and rate, and within a zip code charge grows with usage.
pub const BILLING_CONSTRAINTS: [&str; 3] = [
    "!(t1.Zip == t2.Zip & t1.City != t2.City)",
    "!(t1.Zip == t2.Zip & t1.Rate != t2.Rate)",
    "!(t1.Zip == t2.Zip & t1.Usage > t2.Usage & t1.Charge <= t2.Charge)",
];

const CITIES: [&str; 24] = [
    "Aberdeen", "Bristol", "Cardiff", "Dundee", "Exeter", "Fareham", "Glasgow", "Hereford", "Ipswich", "Jarrow",
    "Kendal", "Leeds", "Margate", "Norwich", "Oxford", "Preston", "Redruth", "Salford", "Truro", "Ullapool", "Vange",
    "Wells", "Yeovil", "Zennor",
];

/// A clean billing relation of `n` tuples in zip groups of about
/// `group` tuples. `Charge = Rate · Usage`.
pub fn billing(seed: u64, n: usize, group: usize) -> Synthetic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zips = n.div_ceil(group.max(1));
    let zip_city: Vec<&str> = (0..zips).map(|_| CITIES[rng.random_range(0..CITIES.len())]).collect();
    let zip_rate: Vec<f64> = (0..zips).map(|_| 0.5 + 0.05 * rng.random_range(0..7) as f64).collect();
    let rows = (0..n)
        .map(|i| {
            let z = i % zips;
            let usage = rng.random_range(100..600) as f64;
            let rate = zip_rate[z];
            vec![
                Value::Text(format!("Z{:04}", 1000 + z)),
                Value::Text(zip_city[z].to_string()),
                Value::Num(rate),
                Value::Num(usage),
                Value::Num((rate * usage * 100.0).round() / 100.0),
            ]
        })
        .collect();
    let schema = [
        ("Zip", AttributeKind::Categorical),
        ("City", AttributeKind::Categorical),
        ("Rate", AttributeKind::Numeric),
        ("Usage", AttributeKind::Numeric),
        ("Charge", AttributeKind::Numeric),
    ]
    .into_iter()
    .map(|(a, k)| (a.to_string(), k))
    .collect();
    let instance = Instance::new(schema, rows).expect("generated rows match the schema");
    let constraints = BILLING_CONSTRAINTS
        .iter()
        .map(|t| parse_dc(t, instance.schema()).expect("built-in constraint parses"))
        .collect();
    Synthetic {
        instance,
        constraints,
        dirty: Vec::new(),
    }
}

/// Numeric tuples following `y = 3x + 1 + noise`, `z = x + y`; never in
/// conflict under any of the crate's built-in constraint sets.
pub fn conflict_free(seed: u64, n: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let x: f64 = rng.random_range(0.0..50.0);
            let y = 3.0 * x + 1.0 + rng.random_range(-1.0..1.0);
            vec![Value::Num(x), Value::Num(y), Value::Num(x + y)]
        })
        .collect();
    let schema = ["x", "y", "z"]
        .into_iter()
        .map(|a| (a.to_string(), AttributeKind::Numeric))
        .collect();
    Instance::new(schema, rows).expect("generated rows match the schema")
}
