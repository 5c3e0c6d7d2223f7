//! One knob at a time: prints the sweep CSV for k and then for gamma.

use osrepair::cli::{inject, run_sweep, write_sweep_csv, ErrorKind, RunConfig, SweepAxis};
use osrepair::repair::SolverLimits;
use osrepair::synth::billing;

fn main() -> anyhow::Result<()> {
    let s = billing(5, 400, 10);
    let dirty = inject(&s.instance, 0.1, &ErrorKind::ALL, 5)?;
    let base = RunConfig::default();

    let ks: Vec<String> = (1..=6).map(|k| k.to_string()).collect();
    let rows = run_sweep(
        &dirty.instance,
        &s.constraints,
        &dirty.dirty,
        &base,
        SweepAxis::K,
        &ks,
        SolverLimits::default(),
        false,
    )?;
    write_sweep_csv(&rows, std::io::stdout())?;

    let gammas = ["0", "0.2", "2", "50"].map(String::from);
    let rows = run_sweep(
        &dirty.instance,
        &s.constraints,
        &dirty.dirty,
        &base,
        SweepAxis::Gamma,
        &gammas,
        SolverLimits::default(),
        false,
    )?;
    write_sweep_csv(&rows, std::io::stdout())?;
    Ok(())
}
