//! Corrupts a clean relation, repairs it with each method and scores the
//! removals against the injected ids.

use osrepair::cli::{evaluate, inject, score, ErrorKind};
use osrepair::repair::{prepare, run_method, Method, RepairParams};
use osrepair::synth::billing;

fn main() -> anyhow::Result<()> {
    let s = billing(7, 600, 12);
    let dirty = inject(&s.instance, 0.1, &ErrorKind::ALL, 7)?;
    for &(t, j, kind) in dirty.cells.iter().take(5) {
        println!(
            "t{t} {}: {} -> {} ({kind})",
            s.instance.schema()[j].name,
            s.instance.value(t, j),
            dirty.instance.value(t, j)
        );
    }

    let prep = prepare(&dirty.instance, &s.constraints, &Default::default())?;
    let n = dirty.instance.len();
    let (p, r, f) = score(prep.graph.conflict_set(), &dirty.dirty, n)?;
    println!("\nremove all conflicts  P {p:.3} R {r:.3} F1 {f:.3}");
    for m in [Method::Exact, Method::Clique, Method::Probabilistic] {
        let out = run_method(&prep, m, &RepairParams::default())?;
        let e = evaluate(&out.removed, out.objective, &dirty.dirty, n)?;
        println!(
            "{:<20}  P {:.3} R {:.3} F1 {:.3}",
            m.to_string(),
            e.precision,
            e.recall,
            e.f1
        );
    }
    Ok(())
}
