//! Builds the loss table and prints the per-tuple view of it.

use std::path::PathBuf;

use osrepair::cli::{load_constraints, load_instance};
use osrepair::constraints::detect_conflicts;
use osrepair::depmodel::{build_loss_table, LossParams, ModelKind};

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inst = load_instance(
        &dir.join("electricity.csv"),
        Some(&dir.join("electricity.types")),
        false,
    )?;
    let dcs = load_constraints(&dir.join("electricity.dcs"), &inst)?;
    let graph = detect_conflicts(&inst, &dcs);

    let model = std::env::args()
        .nth(1)
        .map(|m| m.parse())
        .transpose()?
        .unwrap_or(ModelKind::Linear);
    let params = LossParams {
        k: 2,
        kappa: 4,
        model,
        ..LossParams::default()
    };
    let table = build_loss_table(&inst, &graph, &params)?;
    println!(
        "model {model}, G = {:.4}, eta = {:.4}",
        table.g(),
        table.weights().eta()
    );

    println!(
        "{:>4} {:>9} {:>3} {:>7} {:>9}  providers / candidates",
        "id", "raw loss", "u", "gamma", "L(t)"
    );
    for i in 0..inst.len() {
        println!(
            "{:>4} {:>9.4} {:>3} {:>7.4} {:>9.4}  {:?} / {:?}",
            i,
            table.tuple_raw_loss(i),
            table.u(i),
            table.gamma(i),
            table.tuple_value(i),
            table.providers(i),
            table.candidates(i)
        );
    }

    table.write_diagnostics(&graph, std::io::stdout())?;
    Ok(())
}
