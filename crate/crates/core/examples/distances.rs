//! Loads a table with a type sidecar and prints attribute and tuple distances.

use std::path::PathBuf;

use osrepair::cli::load_instance;

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inst = load_instance(
        &dir.join("electricity.csv"),
        Some(&dir.join("electricity.types")),
        false,
    )?;

    for a in inst.schema() {
        println!("{:<12} {:<11} range {}", a.name, a.kind, a.range());
    }

    let (i, l) = (0, 5);
    println!(
        "\nd(t{}, t{}) per attribute: {:?}",
        i + 1,
        l + 1,
        inst.attribute_distances(i, l)
    );
    println!("tuple distance {:.4}", inst.tuple_distance(i, l));
    // the feature vector a model for attribute 3 (Usage) sees
    println!(
        "distance vector for Usage: {:?}",
        inst.distance_vector(i, l, 3).entries()
    );
    Ok(())
}
