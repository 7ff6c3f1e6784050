// Dirichlet eigenpairs of D^(α,γ) u + λu = 0 on [0, 1].

use fracbvp::solver::{eigen_solve, EigenOptions};

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let report = eigen_solve(1.75, 2.0, 3, &EigenOptions::default())?;
    for p in &report.pairs {
        println!(
            "lambda = {:.10}  terms {}  residual {:.1e}  u(1) = {:.1e}",
            p.lambda, p.series_length, p.derivative_residual, p.value_at_one
        );
    }
    if let Some(n) = report.notice {
        println!("{n}");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
