//! The LP and ILP layer on its own: a weighted triangle, with and without a
//! clique row, on both engines.

use osrepair::optim::{classify_solution, solve_ilp, solve_lp, Engine, IlpOptions, LpModel, LpOptions};

fn triangle(clique_row: bool) -> LpModel {
    let mut m = LpModel::new();
    let x: Vec<usize> = (0..3).map(|i| m.add_variable(format!("x_{i}"), 1.0)).collect();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        m.add_row([(x[a], 1.0), (x[b], 1.0)], 1.0);
    }
    if clique_row {
        m.add_row(x.iter().map(|&v| (v, 1.0)), 1.0);
    }
    m
}

fn main() -> anyhow::Result<()> {
    for clique_row in [false, true] {
        let m = triangle(clique_row);
        for engine in [Engine::Dense, Engine::Sparse] {
            let sol = solve_lp(
                &m,
                &LpOptions {
                    engine,
                    ..LpOptions::default()
                },
            )?;
            println!(
                "clique row {clique_row:<5} {engine:?}: x = {:?}, objective {:.3}, {:?}",
                sol.values,
                sol.objective_value,
                classify_solution(&sol, 1e-6)
            );
        }
    }

    let ilp = solve_ilp(&triangle(false), &IlpOptions::default())?;
    println!(
        "ILP: x = {:?}, objective {}, {} child LPs",
        ilp.values, ilp.objective_value, ilp.iterations
    );

    let mut lp = Vec::new();
    triangle(true).write_lp(&mut lp)?;
    print!("{}", String::from_utf8(lp)?);
    Ok(())
}
