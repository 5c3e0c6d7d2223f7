//! Run configurations as TOML, and the JSON report a repair produces.

use osrepair::cli::{cmd_repair, RunConfig};
use osrepair::repair::SolverLimits;
use osrepair::synth::chains_and_cliques;

fn main() -> anyhow::Result<()> {
    let cfg = RunConfig::from_toml(
        r#"
        method = "prob"
        k = 3
        g = "auto"
        m = 12
        seed = 17
        "#,
    )?;
    print!("{}", cfg.to_toml());

    let s = chains_and_cliques(2, &[3, 4], &[3], 16);
    // limits come from OSR_LP_MAX_ITER / OSR_ILP_MAX_NODES when set
    let (report, _) = cmd_repair(&s.instance, &s.constraints, &cfg, SolverLimits::from_env()?, false)?;
    print!("{}", report.to_json());
    Ok(())
}
