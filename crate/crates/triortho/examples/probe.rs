use triortho::analysis::{assemble_css, dual_distance, is_triply_even};
use triortho::ilp::*;
use std::time::Instant;

fn main() {
    for n in (39..=79).step_by(2) {
        for k0 in 6..=10usize {
            let inst = build_instance(k0, n, 3).unwrap();
            let spec = orbit_partition(k0, &cyclic_shift_generator(k0)).unwrap();
            let opts = SolverOptions {
                cap: None,
                budget: SolveBudget { max_nodes: Some(20_000_000), max_seconds: Some(30.0) },
            };
            let t = Instant::now();
            let outcome = solve(&inst, Some(&spec), &opts);
            let dt = t.elapsed().as_secs_f64();
            match outcome {
                SolveOutcome::Feasible(w) => {
                    let m = extract_matrix(&inst, &w).unwrap();
                    let dd = dual_distance(&m).unwrap();
                    let te = is_triply_even(&m).unwrap();
                    let code = assemble_css(&m).unwrap();
                    println!("n={n} k0={k0}: FEASIBLE in {dt:.2}s dual_distance={dd} te={te} k={}", code.k);
                    break;
                }
                SolveOutcome::Infeasible => println!("n={n} k0={k0}: infeasible ({dt:.2}s)"),
                SolveOutcome::BudgetExhausted => println!("n={n} k0={k0}: BUDGET ({dt:.2}s)"),
            }
        }
    }
}
