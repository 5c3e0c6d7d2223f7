#![allow(dead_code)]

use std::path::PathBuf;

use osrepair::cli::{load_constraints, load_instance};
use osrepair::constraints::DenialConstraint;
use osrepair::depmodel::LossParams;
use osrepair::relation::Instance;
use osrepair::repair::{prepare, Prepared, RepairParams};
use osrepair::synth::random_small;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load_fixture(stem: &str) -> (Instance, Vec<DenialConstraint>) {
    let inst = load_instance(
        &fixture(&format!("{stem}.csv")),
        Some(&fixture(&format!("{stem}.types"))),
        false,
    )
    .unwrap();
    let dcs = load_constraints(&fixture(&format!("{stem}.dcs")), &inst).unwrap();
    (inst, dcs)
}

/// Small-instance loss settings: `k` varies with the seed, pools stay small.
pub fn small_params(seed: u64) -> LossParams {
    LossParams {
        k: 1 + (seed % 4) as usize,
        kappa: 4,
        ..LossParams::default()
    }
}

pub fn repair_params(seed: u64) -> RepairParams {
    RepairParams {
        loss: small_params(seed),
        seed,
        ..RepairParams::default()
    }
}

/// Instance `seed` of the shared random suite: `16 ≤ n ≤ 30`, at most 12
/// conflicting tuples, two FDs.
pub fn suite_instance(seed: u64) -> (Instance, Vec<DenialConstraint>) {
    let n = 16 + (seed % 15) as usize;
    let s = random_small(seed, n, 12);
    (s.instance, s.constraints)
}

pub fn suite_prepared(seed: u64) -> Prepared {
    let (inst, dcs) = suite_instance(seed);
    prepare(&inst, &dcs, &small_params(seed)).unwrap()
}
