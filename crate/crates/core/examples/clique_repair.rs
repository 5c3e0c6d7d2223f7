//! The iterative LP with clique rows, on the chains-and-cliques fixture. The
//! diagnostics show how many rounds and clique rows it took.

use std::path::PathBuf;

use osrepair::cli::{load_constraints, load_instance};
use osrepair::repair::{clique_repair, exact_repair, RepairParams};

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inst = load_instance(
        &dir.join("chains_cliques.csv"),
        Some(&dir.join("chains_cliques.types")),
        false,
    )?;
    let dcs = load_constraints(&dir.join("chains_cliques.dcs"), &inst)?;
    let params = RepairParams::default();

    let r = clique_repair(&inst, &dcs, &params)?;
    println!("removed {:?}", r.removed);
    println!("objective {:.4}", r.objective);
    println!("{}", serde_json::to_string_pretty(&r.diagnostics)?);

    let e = exact_repair(&inst, &dcs, &params)?;
    println!(
        "exact objective {:.4} (same set: {})",
        e.objective,
        e.removed == r.removed
    );
    Ok(())
}
