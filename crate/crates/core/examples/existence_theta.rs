// θ, θ* and the hypotheses of the cone existence theorem.

use fracbvp::analysis::{corollary_bound, existence_check, theta_pair, ProblemSpec};
use fracbvp::quadrature::QuadratureConfig;

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ProblemSpec::parse(0.0, 1.0, 1.5, 1.5, "sqrt(t)", "exp(-1/(u+1))")?;
    let tp = theta_pair(&spec, &QuadratureConfig::default())?;
    println!(
        "theta = {:.10}  theta* = {:.10}  r = {:.10}",
        tp.theta, tp.theta_star, tp.r
    );

    let (r1, r2) = (0.05, 0.1);
    let rep = existence_check(&spec, r1, r2, &tp)?;
    println!("window [{r1}, {r2}]: {:?}", rep.verdict);
    println!("  margin (A) {:.6} at u = {}", rep.margin_a, rep.worst_u_a);
    println!("  margin (B) {:.6} at u = {}", rep.margin_b, rep.worst_u_b);
    println!(
        "corollary bound on the integral of q: {:.6}",
        corollary_bound(&spec, r1, r2)?
    );

    // a window where both hypotheses hold with these constants
    let mild = ProblemSpec::parse(0.0, 1.0, 1.5, 1.5, "sqrt(t)", "1 + u/10")?;
    let rep = existence_check(
        &mild,
        0.05,
        0.5,
        &theta_pair(&mild, &QuadratureConfig::default())?,
    )?;
    println!("f(u) = 1 + u/10 on [0.05, 0.5]: {:?}", rep.verdict);
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
