//! Randomized repair over a few seeds, next to the exact optimum.

use osrepair::cli::{inject, ErrorKind};
use osrepair::repair::{prepare, run_method, Method, RepairParams};
use osrepair::synth::billing;

fn main() -> anyhow::Result<()> {
    let s = billing(3, 400, 10);
    let dirty = inject(&s.instance, 0.1, &ErrorKind::ALL, 3)?;
    let prep = prepare(&dirty.instance, &s.constraints, &Default::default())?;

    let exact = run_method(&prep, Method::Exact, &RepairParams::default())?;
    println!("exact    {:>10.3}  {} removed", exact.objective, exact.removed.len());
    for seed in 0..5 {
        let r = run_method(
            &prep,
            Method::Probabilistic,
            &RepairParams {
                seed,
                ..RepairParams::default()
            },
        )?;
        println!(
            "seed {seed:<3} {:>10.3}  {} removed, {} put back",
            r.objective,
            r.removed.len(),
            r.diagnostics.reinserted
        );
    }
    Ok(())
}
