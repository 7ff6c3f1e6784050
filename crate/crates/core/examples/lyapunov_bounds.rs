// Necessary conditions for nontrivial solutions.

use fracbvp::analysis::{
    eigen_lower_bound_hw, eigen_lower_bound_lyapunov, hartman_wintner_check, lyapunov_bound,
    lyapunov_check_linear, lyapunov_check_nonlinear, ProblemSpec,
};
use fracbvp::quadrature::QuadratureConfig;

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();

    let classical = ProblemSpec::linear(0.0, 1.0, 2.0, 2.0, "9.87")?;
    println!("classical bound 4/(b-a) = {}", lyapunov_bound(&classical));
    let r = lyapunov_check_linear(&classical, &cfg)?;
    println!("{:?}: {:.6} vs {:.6} -> {:?}", r.kind, r.lhs, r.rhs, r.verdict);

    let small = ProblemSpec::linear(0.0, 1.0, 1.6, 1.8, "1 + t")?;
    let r = lyapunov_check_linear(&small, &cfg)?;
    println!("{:?}: {:.6} vs {:.6} -> {:?}", r.kind, r.lhs, r.rhs, r.verdict);
    let r = hartman_wintner_check(&small, 1.0, &cfg)?;
    println!("{:?}: {:.6} vs {:.6} -> {:?}", r.kind, r.lhs, r.rhs, r.verdict);

    let nonlinear = ProblemSpec::parse(0.0, 1.0, 1.75, 2.0, "t^2", "cosh(u)")?;
    let r = lyapunov_check_nonlinear(&nonlinear, 0.5, &cfg)?;
    println!("{:?}: {:.6} vs {:.6} -> {:?}", r.kind, r.lhs, r.rhs, r.verdict);

    println!(
        "eigenvalues of D^(1.75,2) on [0,1] exceed {:.6} and {:.6}",
        eigen_lower_bound_lyapunov(1.75, 2.0)?,
        eigen_lower_bound_hw(1.75, 2.0, 1.0)?
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
