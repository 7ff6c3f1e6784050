// The two-parameter Mittag-Leffler function and its real zeros.

use fracbvp::specfun::{ml_eval, ml_roots, ml_series, DEFAULT_MAX_TERMS};

fn run() -> Result<(), Box<dyn std::error::Error>> {
    for x in [-2.0, 0.5, 3.0] {
        let v = ml_eval(1.0, 1.0, x, 1e-12)?;
        println!(
            "E_1,1({x}) = {:.15}  exp = {:.15}  bound {:.1e}",
            v.value,
            f64::exp(x),
            v.error_bound()
        );
    }

    // sin(√x)/√x, summed in double-double arithmetic
    let v = ml_series(2.0, 2.0, -100.0, 1e-12, DEFAULT_MAX_TERMS)?;
    println!(
        "E_2,2(-100) = {:.15} (terms {}, bound {:.1e})",
        v.value,
        v.terms_used,
        v.error_bound()
    );

    for (alpha, gamma) in [(2.0, 2.0), (1.75, 2.0), (1.5, 1.5)] {
        let roots = ml_roots(alpha, gamma, 60.0, 2000, 1e-12)?;
        println!("zeros of E_{alpha},{gamma}(-λ) in (0, 60]: {:?}", roots.lambdas());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
