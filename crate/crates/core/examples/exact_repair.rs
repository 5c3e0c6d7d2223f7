use std::path::PathBuf;

use osrepair::cli::{load_constraints, load_instance};
use osrepair::depmodel::LossParams;
use osrepair::repair::{exact_repair, RepairParams};

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inst = load_instance(
        &dir.join("chains_cliques.csv"),
        Some(&dir.join("chains_cliques.types")),
        false,
    )?;
    let dcs = load_constraints(&dir.join("chains_cliques.dcs"), &inst)?;

    let params = RepairParams {
        loss: LossParams {
            k: 3,
            ..LossParams::default()
        },
        ..RepairParams::default()
    };
    let r = exact_repair(&inst, &dcs, &params)?;
    println!("removed {:?}", r.removed);
    println!("objective {:.4}", r.objective);
    println!("{} LP solves in branch and bound", r.diagnostics.lp_solves);
    Ok(())
}
