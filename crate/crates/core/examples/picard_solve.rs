// Solving u = ∫ G q f(u) by successive approximation and checking the result
// with an independent quadrature.

use fracbvp::analysis::ProblemSpec;
use fracbvp::solver::{picard_solve, residual_certify, PicardOptions};

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ProblemSpec::parse(0.0, 1.0, 1.75, 2.0, "t^2", "cosh(u)")?;
    let sol = picard_solve(&spec, &PicardOptions::default())?;
    println!(
        "converged: {} after {} sweeps, sup norm {:.10}, discrete residual {:.1e}",
        sol.converged, sol.iterations, sol.norm, sol.residual_sup
    );
    println!("certified residual {:.1e}", residual_certify(&spec, &sol)?);
    for i in (0..sol.grid.len()).step_by(60) {
        println!("  u({:.4}) = {:.10}", sol.grid[i], sol.values[i]);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
