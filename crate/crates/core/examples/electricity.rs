//! Walkthrough on the twelve-row billing table: conflicts, the six candidate
//! repairs and their objective, then what each solver picks.
//!
//! Tuple numbers are printed 1-based to match the table rows.

use std::path::PathBuf;

use osrepair::cli::{load_constraints, load_instance};
use osrepair::constraints::enumerate_minimal_removal_sets;
use osrepair::depmodel::LossParams;
use osrepair::repair::{evaluate_objective, prepare, run_method, Method, RepairParams};

fn ids(v: &[usize]) -> String {
    let names: Vec<String> = v.iter().map(|i| format!("t{}", i + 1)).collect();
    format!("{{{}}}", names.join(", "))
}

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inst = load_instance(
        &dir.join("electricity.csv"),
        Some(&dir.join("electricity.types")),
        false,
    )?;
    let dcs = load_constraints(&dir.join("electricity.dcs"), &inst)?;

    let loss = LossParams {
        k: 2,
        kappa: 4,
        gamma: 0.2,
        ..LossParams::default()
    };
    let prep = prepare(&inst, &dcs, &loss)?;
    let pairs: Vec<String> = prep
        .graph
        .edges()
        .iter()
        .map(|&(a, b)| format!("t{}-t{}", a + 1, b + 1))
        .collect();
    println!("conflicts: {}", pairs.join(" "));

    let w = prep.table.weights();
    for set in enumerate_minimal_removal_sets(&prep.graph, 16).expect("five conflicting tuples") {
        println!("  remove {:<16} L = {:.4}", ids(&set), evaluate_objective(w, &set));
    }

    let params = RepairParams {
        loss,
        ..RepairParams::default()
    };
    for m in Method::ALL {
        let r = run_method(&prep, m, &params)?;
        println!("{:<14} removes {}", m.to_string(), ids(&r.removed));
    }
    Ok(())
}
