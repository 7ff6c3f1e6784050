// Coefficients and nonlinearities are plain text, parsed once and evaluated
// many times.

use fracbvp::expr::{Expr, Variable};

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let q = Expr::parse("sqrt(t) * (1 + t^2)", Variable::T)?;
    let f = Expr::parse("exp(-1/(u+1))", Variable::U)?;
    for x in [0.0, 0.25, 0.5, 1.0] {
        println!("q({x}) = {:.6}   f({x}) = {:.6}", q.eval(x)?, f.eval(x)?);
    }

    // errors carry the byte offset of the problem
    match Expr::parse("cosh(u) + t", Variable::U) {
        Err(e) => println!("rejected: {e} (offset {:?})", e.offset()),
        Ok(_) => unreachable!(),
    }
    match Expr::parse("log(t)", Variable::T)?.eval(0.0) {
        Err(e) => println!("evaluation error: {e}"),
        Ok(v) => println!("log(0) = {v}"),
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
