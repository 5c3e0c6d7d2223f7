//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so every verdict prints even when an earlier one fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{load_fixture, repair_params, suite_instance, suite_prepared};
use osrepair::cli::{inject, score, ErrorKind, RunConfig};
use osrepair::constraints::{
    enumerate_minimal_removal_sets, greedy_maximal_clique, is_minimal_removal_set, ConflictGraph,
};
use osrepair::depmodel::{gamma, LossParams};
use osrepair::optim::{build_osr_model, classify_solution, solve_ilp, solve_lp, IlpOptions, LpOptions, SolutionClass};
use osrepair::repair::{keep_probability, prepare, probabilistic_repair, run_method, Method, RepairParams};
use osrepair::synth::{billing, chains_and_cliques, conflict_free};

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn choose3(c: usize) -> usize {
    if c < 3 {
        0
    } else {
        c * (c - 1) * (c - 2) / 6
    }
}

const SUITE: u64 = 100;

fn oracle_equivalence() -> Verdict {
    let started = Instant::now();
    let mut worst = 0.0f64;
    let mut max_conflict = 0;
    for seed in 0..SUITE {
        let prep = suite_prepared(seed);
        max_conflict = max_conflict.max(prep.graph.conflict_set().len());
        let p = repair_params(seed);
        let exact = run_method(&prep, Method::Exact, &p).map_err(err)?;
        let oracle = run_method(&prep, Method::Oracle, &p).map_err(err)?;
        let gap = (exact.objective - oracle.objective).abs();
        if gap > 1e-6 {
            return Err(format!(
                "seed {seed}: exact {} vs oracle {}",
                exact.objective, oracle.objective
            ));
        }
        worst = worst.max(gap);
    }
    let secs = started.elapsed().as_secs_f64();
    check(
        secs < 60.0 && max_conflict <= 12,
        format!("{SUITE} instances, max |I_C| {max_conflict}, worst gap {worst:.2e}, {secs:.2}s"),
    )
}

fn half_integrality() -> Verdict {
    let near = |v: f64| [0.0, 0.5, 1.0].iter().any(|t| (v - t).abs() <= 1e-6);
    let (mut integral, mut half, mut other) = (0, 0, 0);
    for seed in 0..SUITE {
        let prep = suite_prepared(seed);
        let osr = build_osr_model(prep.table.weights(), &prep.graph, &[]);
        let sol = solve_lp(&osr.model, &LpOptions::default()).map_err(err)?;
        match classify_solution(&sol, 1e-6) {
            SolutionClass::Other => other += 1,
            class => {
                if !sol.values.iter().all(|&v| near(v)) {
                    return Err(format!(
                        "seed {seed}: classified {class:?} with a value off the half grid"
                    ));
                }
                if class == SolutionClass::Integral {
                    integral += 1
                } else {
                    half += 1
                }
            }
        }
    }
    let share = other as f64 / SUITE as f64;
    check(
        share < 0.05,
        format!(
            "integral {integral}, half-integral {half}, other {other} ({:.1}%)",
            share * 100.0
        ),
    )
}

fn all_cliques(graph: &ConflictGraph) -> Vec<Vec<usize>> {
    let ic = graph.conflict_set();
    let mut out: Vec<Vec<usize>> = ic
        .iter()
        .map(|&v| {
            let mut c = greedy_maximal_clique(graph, v, ic);
            c.sort_unstable();
            c
        })
        .filter(|c| c.len() > 2)
        .collect();
    out.sort();
    out.dedup();
    out
}

fn clique_neutrality() -> Verdict {
    let mut rows = 0;
    let mut worst = 0.0f64;
    for seed in 0..50 {
        let prep = suite_prepared(1000 + seed);
        let w = prep.table.weights();
        let cliques = all_cliques(&prep.graph);
        rows += cliques.len();
        let plain = solve_ilp(&build_osr_model(w, &prep.graph, &[]).model, &IlpOptions::default()).map_err(err)?;
        let tight = solve_ilp(&build_osr_model(w, &prep.graph, &cliques).model, &IlpOptions::default()).map_err(err)?;
        let gap = (plain.objective_value - tight.objective_value).abs();
        if gap > 1e-6 {
            return Err(format!(
                "seed {seed}: {} without cliques, {} with",
                plain.objective_value, tight.objective_value
            ));
        }
        worst = worst.max(gap);
    }
    check(true, format!("50 instances, {rows} clique rows, worst gap {worst:.2e}"))
}

fn certain_case() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut found, mut tried) = (0, 0);
    while found < 25 && tried < 400 {
        tried += 1;
        let chains: Vec<usize> = (0..rng.random_range(1..4)).map(|_| rng.random_range(2..7)).collect();
        let cliques: Vec<usize> = (0..rng.random_range(1..4)).map(|_| rng.random_range(3..6)).collect();
        let s = chains_and_cliques(tried, &chains, &cliques, rng.random_range(15..30));
        let prep = prepare(
            &s.instance,
            &s.constraints,
            &LossParams {
                kappa: 4,
                ..LossParams::default()
            },
        )
        .map_err(err)?;
        let p = RepairParams::default();
        let clique = run_method(&prep, Method::Clique, &p).map_err(err)?;
        if clique.diagnostics.final_lp_class != Some(SolutionClass::Integral) {
            continue;
        }
        found += 1;
        let exact = run_method(&prep, Method::Exact, &p).map_err(err)?;
        if clique.objective != exact.objective {
            return Err(format!(
                "instance {tried}: clique {} vs exact {} ({:?} vs {:?})",
                clique.objective, exact.objective, clique.removed, exact.removed
            ));
        }
    }
    check(
        found >= 25,
        format!("{found} instances with an integral final LP out of {tried} generated"),
    )
}

fn approximation_bound() -> Verdict {
    let mut tightest = f64::INFINITY;
    for seed in 0..SUITE {
        let prep = suite_prepared(seed);
        let p = repair_params(seed);
        let exact = run_method(&prep, Method::Exact, &p).map_err(err)?;
        let clique = run_method(&prep, Method::Clique, &p).map_err(err)?;
        let n = prep.graph.num_tuples() as f64;
        let clean = n - prep.graph.conflict_set().len() as f64;
        let bound = prep.table.weights().eta() * clean / n;
        let ratio = clique.objective / exact.objective;
        if ratio < bound - 1e-12 {
            return Err(format!("seed {seed}: ratio {ratio} below bound {bound}"));
        }
        tightest = tightest.min(ratio - bound);
    }
    check(true, format!("{SUITE} instances, smallest slack {tightest:.4}"))
}

fn probabilistic_bound() -> Verdict {
    let mut min_margin = f64::INFINITY;
    for seed in 200..220 {
        let prep = suite_prepared(seed);
        let p = repair_params(seed);
        let exact = run_method(&prep, Method::Exact, &p).map_err(err)?.objective;
        let samples: Vec<f64> = (0..200)
            .map(|s| {
                let params = RepairParams { seed: s, ..p.clone() };
                run_method(&prep, Method::Probabilistic, &params).map(|r| r.objective)
            })
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let mean = samples.iter().sum::<f64>() / 200.0;
        let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 199.0;
        let se = (var / 200.0).sqrt();
        let eta = prep.table.weights().eta();
        let v = prep.graph.max_degree() as i32;
        let bound = (eta / 2.0).powi(2 * v + 1) * exact;
        if mean < bound - 2.0 * se {
            return Err(format!("seed {seed}: mean {mean} < bound {bound} - 2·{se}"));
        }
        min_margin = min_margin.min((mean + 2.0 * se) / exact);
    }
    check(
        true,
        format!("20 instances × 200 seeds, lowest (mean+2se)/exact {min_margin:.4}"),
    )
}

fn convergence() -> Verdict {
    let mut worst_fixture = 0;
    let configs = [
        (
            "electricity",
            LossParams {
                k: 2,
                kappa: 4,
                ..LossParams::default()
            },
        ),
        ("electricity", LossParams::default()),
        ("chains_cliques", LossParams::default()),
        ("billing", LossParams::default()),
    ];
    for (stem, loss) in configs {
        let (inst, dcs) = load_fixture(stem);
        let prep = prepare(&inst, &dcs, &loss).map_err(err)?;
        let r = run_method(
            &prep,
            Method::Clique,
            &RepairParams {
                loss,
                ..RepairParams::default()
            },
        )
        .map_err(err)?;
        worst_fixture = worst_fixture.max(r.diagnostics.iterations);
    }
    for seed in 0..SUITE {
        let prep = suite_prepared(seed);
        let r = run_method(&prep, Method::Clique, &repair_params(seed)).map_err(err)?;
        let cap = choose3(prep.graph.conflict_set().len()).max(1);
        if r.diagnostics.iterations > cap {
            return Err(format!(
                "seed {seed}: {} iterations > C(|I_C|,3) = {cap}",
                r.diagnostics.iterations
            ));
        }
    }
    check(
        worst_fixture <= 5,
        format!("fixtures at most {worst_fixture} iterations; suite within C(|I_C|,3)"),
    )
}

fn minimality() -> Verdict {
    let mut runs = 0;
    for combo in 0..500u64 {
        let instance_seed = 3000 + combo / 4;
        let (inst, dcs) = suite_instance(instance_seed);
        let prep = prepare(&inst, &dcs, &common::small_params(instance_seed)).map_err(err)?;
        let p = RepairParams {
            seed: combo,
            ..repair_params(instance_seed)
        };
        for method in Method::ALL {
            let r = run_method(&prep, method, &p).map_err(err)?;
            runs += 1;
            if !is_minimal_removal_set(&prep.graph, &r.removed) {
                return Err(format!("combo {combo}, {method}: {:?} is not minimal", r.removed));
            }
        }
    }
    check(true, format!("500 combinations, {runs} removal sets"))
}

fn reference_values() -> Verdict {
    let p57 = keep_probability(0.005, 1.220);
    let g = gamma(2, 0.2);
    let (inst, dcs) = load_fixture("electricity");
    let graph = osrepair::constraints::detect_conflicts(&inst, &dcs);
    let sets = enumerate_minimal_removal_sets(&graph, 16).ok_or("enumeration limit")?;
    let shape = graph.edges() == [(4, 6), (9, 10), (9, 11), (10, 11)];
    check(
        format!("{p57:.3}") == "0.004" && (g - 1.32).abs() < 1e-12 && shape && sets.len() == 6,
        format!(
            "keep probability {p57:.3}, gamma(2,0.2) {g}, {} minimal removal sets",
            sets.len()
        ),
    )
}

fn billing_f1() -> Verdict {
    let s = billing(21, 2000, 10);
    let dirty = inject(&s.instance, 0.1, &ErrorKind::ALL, 21).map_err(err)?;
    let inst = &dirty.instance;
    let prep = prepare(inst, &s.constraints, &RunConfig::default().loss_params()).map_err(err)?;
    let params = RunConfig::default().repair_params(Default::default());
    let n = inst.len();
    let (_, _, base) = score(prep.graph.conflict_set(), &dirty.dirty, n).map_err(err)?;
    let clique = run_method(&prep, Method::Clique, &params).map_err(err)?;
    let prob = run_method(&prep, Method::Probabilistic, &params).map_err(err)?;
    let (_, _, fc) = score(&clique.removed, &dirty.dirty, n).map_err(err)?;
    let (_, _, fp) = score(&prob.removed, &dirty.dirty, n).map_err(err)?;
    check(
        fc > base && fp > base && fc >= fp - 0.02,
        format!(
            "|I_C| {}, F1 clique {fc:.3}, probabilistic {fp:.3}, remove-all {base:.3}",
            prep.graph.conflict_set().len()
        ),
    )
}

fn timed(n: usize) -> Result<Duration, String> {
    let inst = conflict_free(5, n);
    let params = RepairParams::default();
    let mut best = Duration::MAX;
    for _ in 0..3 {
        let t = Instant::now();
        probabilistic_repair(&inst, &[], &params).map_err(err)?;
        best = best.min(t.elapsed());
    }
    Ok(best)
}

fn scalability() -> Verdict {
    let small = timed(1000)?;
    let large = timed(2000)?;
    let ratio = large.as_secs_f64() / small.as_secs_f64();
    check(
        (3.0..=6.0).contains(&ratio),
        format!(
            "n=1000 {:.0} ms, n=2000 {:.0} ms, ratio {ratio:.2}",
            small.as_secs_f64() * 1e3,
            large.as_secs_f64() * 1e3
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("oracle equivalence", oracle_equivalence),
        ("half-integrality", half_integrality),
        ("clique-row neutrality", clique_neutrality),
        ("certain-case optimality", certain_case),
        ("approximation bound", approximation_bound),
        ("probabilistic bound", probabilistic_bound),
        ("convergence", convergence),
        ("minimality", minimality),
        ("reference values", reference_values),
        ("billing F1", billing_f1),
        ("scalability", scalability),
    ];
    let mut failed = 0;
    for (no, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let verdict = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("acceptance {:>2} {name}: PASS ({detail}) [{secs:.1}s]", no + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {:>2} {name}: FAIL ({detail}) [{secs:.1}s]", no + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
