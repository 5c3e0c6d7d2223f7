//! Brute force over every minimal removal set. Only for small conflict sets.

use osrepair::repair::{prepare, run_method, Method, RepairParams};
use osrepair::synth::random_small;

fn main() -> anyhow::Result<()> {
    let params = RepairParams::default();
    for seed in 0..8 {
        let s = random_small(seed, 24, 10);
        let prep = prepare(&s.instance, &s.constraints, &params.loss)?;
        let o = run_method(&prep, Method::Oracle, &params)?;
        let e = run_method(&prep, Method::Exact, &params)?;
        println!(
            "seed {seed}: |I_C| = {:>2}  oracle {:>9.4} {:?}  exact {:>9.4}",
            prep.graph.conflict_set().len(),
            o.objective,
            o.removed,
            e.objective
        );
    }
    Ok(())
}
