mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixture;
use osrepair::cli::{parse_report, parse_truth};
use osrepair::constraints::{detect_conflicts, is_minimal_removal_set};

fn osr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osr")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn input_args(stem: &str) -> Vec<String> {
    ["csv", "dcs", "types"]
        .iter()
        .zip(["--data", "--dcs", "--types"])
        .flat_map(|(ext, flag)| {
            [
                flag.to_string(),
                fixture(&format!("{stem}.{ext}")).display().to_string(),
            ]
        })
        .collect()
}

fn repair(stem: &str, extra: &[&str]) -> Output {
    let mut args: Vec<String> = vec!["repair".into()];
    args.extend(input_args(stem));
    args.extend(extra.iter().map(|s| s.to_string()));
    osr(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn electricity_report() {
    let out = repair("electricity", &["--k", "2", "--kappa", "4", "--gamma", "0.2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = parse_report(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.removed, vec![4, 9, 11]);
    assert_eq!(r.tuples, 12);
}

#[test]
fn probabilistic_reports_are_byte_identical() {
    let a = repair("billing", &["--method", "prob", "--seed", "9"]);
    let b = repair("billing", &["--method", "prob", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exact_and_clique_agree_on_the_chains_fixture() {
    let e =
        parse_report(std::str::from_utf8(&repair("chains_cliques", &["--method", "exact"]).stdout).unwrap()).unwrap();
    let c =
        parse_report(std::str::from_utf8(&repair("chains_cliques", &["--method", "clique"]).stdout).unwrap()).unwrap();
    assert_eq!(e.objective, c.objective);
}

#[test]
fn constraint_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dcs");
    std::fs::write(&bad, "!(t1.Month == t2.Nope)\n").unwrap();
    let out = osr(&[
        "repair",
        "--data",
        path(&fixture("electricity.csv")),
        "--types",
        path(&fixture("electricity.types")),
        "--dcs",
        path(&bad),
    ]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&bad, "!(t1.Month ~ t2.Month)\n").unwrap();
    let out = osr(&[
        "detect",
        "--data",
        path(&fixture("electricity.csv")),
        "--dcs",
        path(&bad),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_limits_exit_3() {
    let mut args: Vec<String> = vec!["repair".into()];
    args.extend(input_args("billing"));
    args.extend(["--method", "exact"].map(String::from));
    let out = Command::new(env!("CARGO_BIN_EXE_osr"))
        .args(&args)
        .env("OSR_LP_MAX_ITER", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_input_exits_1() {
    let out = osr(&["detect", "--data", "/nonexistent.csv", "--dcs", "/nonexistent.dcs"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn conflict_free_input_removes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let dcs = dir.path().join("d.dcs");
    std::fs::write(&data, "a,b\n1,2\n2,4\n3,6\n4,8\n5,10\n").unwrap();
    std::fs::write(&dcs, "!(t1.a == t2.a & t1.b != t2.b)\n").unwrap();
    let out = osr(&[
        "repair",
        "--data",
        path(&data),
        "--dcs",
        path(&dcs),
        "--k",
        "2",
        "--kappa",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(parse_report(std::str::from_utf8(&out.stdout).unwrap())
        .unwrap()
        .removed
        .is_empty());
}

#[test]
fn config_file_and_side_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "method = \"exact\"\nk = 2\nkappa = 4\n").unwrap();
    let saved = dir.path().join("saved.toml");
    let lp = dir.path().join("m.lp");
    let loss = dir.path().join("loss.csv");
    let report = dir.path().join("r.json");
    let out = repair(
        "electricity",
        &[
            "--config",
            path(&cfg),
            "--seed",
            "3",
            "--save-config",
            path(&saved),
            "--dump-lp",
            path(&lp),
            "--loss-csv",
            path(&loss),
            "--out",
            path(&report),
            "--timing",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let saved = std::fs::read_to_string(&saved).unwrap();
    assert!(saved.contains("method = \"exact\"") && saved.contains("seed = 3"));
    assert!(std::fs::read_to_string(&lp).unwrap().starts_with("\\"));
    assert_eq!(std::fs::read_to_string(&loss).unwrap().lines().count(), 13);
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("wall_time_ms"));
    assert_eq!(parse_report(&text).unwrap().removed, vec![4, 9, 11]);
}

#[test]
fn inject_repair_evaluate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let dirty = dir.path().join("dirty.csv");
    let truth = dir.path().join("truth.txt");
    let inject = |out: &Path| {
        osr(&[
            "inject",
            "--data",
            path(&fixture("billing.csv")),
            "--types",
            path(&fixture("billing.types")),
            "--rate",
            "0.05",
            "--kinds",
            "outlier,duplicate",
            "--seed",
            "4",
            "--out",
            path(out),
            "--truth",
            path(&truth),
        ])
    };
    assert!(inject(&dirty).status.success());
    let again = dir.path().join("again.csv");
    assert!(inject(&again).status.success());
    assert_eq!(std::fs::read(&dirty).unwrap(), std::fs::read(&again).unwrap());
    assert_eq!(
        parse_truth(&std::fs::read_to_string(&truth).unwrap()).unwrap().len(),
        15
    );

    let report = dir.path().join("r.json");
    let out = osr(&[
        "repair",
        "--data",
        path(&dirty),
        "--types",
        path(&fixture("billing.types")),
        "--dcs",
        path(&fixture("billing.dcs")),
        "--out",
        path(&report),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = osr(&["evaluate", "--report", path(&report), "--truth", path(&truth)]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["precision", "recall", "f1"] {
        let x = v[key].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&x));
    }
}

#[test]
fn bad_inject_rate_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = osr(&[
        "inject",
        "--data",
        path(&fixture("billing.csv")),
        "--rate",
        "1.5",
        "--out",
        path(&dir.path().join("x.csv")),
        "--truth",
        path(&dir.path().join("t")),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_writes_one_row_per_value() {
    let mut args: Vec<String> = vec!["sweep".into()];
    args.extend(input_args("billing"));
    args.extend(
        [
            "--truth",
            path(&fixture("billing.truth")),
            "--axis",
            "gamma",
            "--values",
            "0,2,50",
        ]
        .map(String::from),
    );
    let out = osr(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("axis,value,method,precision"));
}

#[test]
fn detect_and_reported_sets_revalidate() {
    let out = osr(&{
        let mut a = vec!["detect".to_string()];
        a.extend(input_args("chains_cliques"));
        a
    }
    .iter()
    .map(String::as_str)
    .collect::<Vec<_>>());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let (inst, dcs) = common::load_fixture("chains_cliques");
    let graph = detect_conflicts(&inst, &dcs);
    assert_eq!(v["edges"].as_array().unwrap().len(), graph.edges().len());
    for m in ["exact", "clique", "prob", "oracle"] {
        let r = parse_report(std::str::from_utf8(&repair("chains_cliques", &["--method", m]).stdout).unwrap()).unwrap();
        assert!(is_minimal_removal_set(&graph, &r.removed), "{m}");
    }
}
