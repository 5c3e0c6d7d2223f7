//! Writes a generated relation as `<name>.csv`, `.dcs`, `.types` and, when
//! the generator or the injector knows them, `.truth`.
//!
//! ```text
//! cargo run --example synthetic -- billing 300 out/billing
//! cargo run --example synthetic -- chains out/chains
//! cargo run --example synthetic -- small 7 out/small
//! ```

use std::path::Path;

use osrepair::cli::{format_truth, inject, ErrorKind};
use osrepair::relation::{write_csv, write_schema_hint, Instance};
use osrepair::synth::{billing, chains_and_cliques, random_small, Synthetic};

fn save(stem: &Path, inst: &Instance, s: &Synthetic, dirty: &[usize]) -> anyhow::Result<()> {
    if let Some(dir) = stem.parent() {
        std::fs::create_dir_all(dir)?;
    }
    write_csv(inst, std::fs::File::create(stem.with_extension("csv"))?)?;
    std::fs::write(stem.with_extension("types"), write_schema_hint(inst))?;
    let dcs: String = s.constraints.iter().map(|dc| format!("{dc}\n")).collect();
    std::fs::write(stem.with_extension("dcs"), dcs)?;
    if !dirty.is_empty() {
        std::fs::write(stem.with_extension("truth"), format_truth(dirty))?;
    }
    println!("wrote {} ({} tuples)", stem.display(), inst.len());
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["billing", n, out] => {
            let s = billing(11, n.parse()?, 10);
            let dirty = inject(&s.instance, 0.1, &ErrorKind::ALL, 11)?;
            save(Path::new(out), &dirty.instance, &s, &dirty.dirty)
        }
        ["chains", out] => {
            let s = chains_and_cliques(3, &[2, 3, 4], &[3, 4], 20);
            save(Path::new(out), &s.instance, &s, &s.dirty)
        }
        ["small", seed, out] => {
            let s = random_small(seed.parse()?, 24, 12);
            save(Path::new(out), &s.instance, &s, &s.dirty)
        }
        _ => anyhow::bail!("usage: synthetic (billing N | chains | small SEED) OUT_STEM"),
    }
}
