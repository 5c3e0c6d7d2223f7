//! Conflict detection, cliques and the minimal removal sets of a small table.

use std::path::PathBuf;

use osrepair::cli::{load_constraints, load_instance};
use osrepair::constraints::{detect_conflicts, enumerate_minimal_removal_sets, greedy_maximal_clique};

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inst = load_instance(
        &dir.join("electricity.csv"),
        Some(&dir.join("electricity.types")),
        false,
    )?;
    let dcs = load_constraints(&dir.join("electricity.dcs"), &inst)?;
    for dc in &dcs {
        println!("{dc}");
    }

    let g = detect_conflicts(&inst, &dcs);
    println!("edges {:?}", g.edges());
    println!("conflict set {:?}, max degree {}", g.conflict_set(), g.max_degree());
    for &v in g.conflict_set() {
        println!("clique from {v}: {:?}", greedy_maximal_clique(&g, v, g.conflict_set()));
    }

    let sets = enumerate_minimal_removal_sets(&g, 16).expect("small conflict set");
    println!("{} minimal removal sets:", sets.len());
    for s in sets {
        println!("  {s:?}");
    }
    Ok(())
}
