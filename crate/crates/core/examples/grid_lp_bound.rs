//! Grid LP lower bounds over an m-sweep, with both solver backends on a
//! small grid and the restriction check of a construction.
//!
//! cargo run --release --example grid_lp_bound

use std::time::Instant;

use elopt::construct::linear_opt;
use elopt::lp::{build_lp, restriction_witness, solve_lp, solve_lp_with, Backend, RowKind, SolveOptions};
use elopt::{Hyperplane, SSurface};

fn main() -> elopt::Result<()> {
    let h = Hyperplane::new(vec![1.0, 2.0], 1.0)?;
    let s = SSurface::Hyperplane(h.clone());
    for m in [8, 16, 32, 64] {
        let lp = build_lp(&s, m)?;
        let start = Instant::now();
        let sol = solve_lp(&lp)?;
        println!(
            "m = {m}: {} rows ({} crossing), bound {:.6} via {:?} in {:.2?}",
            lp.rows.len(),
            lp.count(RowKind::Crossing),
            sol.value,
            sol.backend,
            start.elapsed()
        );
    }

    let lp = build_lp(&s, 8)?;
    for backend in [Backend::Simplex, Backend::InteriorPoint] {
        let sol = solve_lp_with(&lp, &SolveOptions { backend, ..Default::default() })?;
        println!("m = 8 {backend:?}: {:.9} after {} iterations", sol.value, sol.iterations);
    }

    let r = restriction_witness(&lp, &linear_opt(&h)?.expr);
    println!("optimum on the grid: max row violation {:e}, objective {}", r.max_violation, r.objective);
    println!("{}", lp.to_lp_format().lines().take(6).collect::<Vec<_>>().join("\n"));
    Ok(())
}
