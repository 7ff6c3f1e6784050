// Riemann-Liouville integrals and the generalized Hilfer derivative on power
// functions, and a numerical integral of sampled data.

use fracbvp::fracops::{hilfer_power, rl_integral_numeric, rl_integral_power, PowerTerm, SampledFn};

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let t2 = PowerTerm::new(1.0, 3.0, 0.0)?; // t^2
    let i = rl_integral_power(t2, 0.5)?;
    println!("I^0.5 t^2 = {:.6} t^{}", i.coefficient, i.exponent());

    // the same derivative for three choices of the type
    for gamma in [1.5, 1.75, 2.0] {
        let d = hilfer_power(t2, 1.5, gamma)?;
        println!("D^(1.5,{gamma}) t^2 = {:.6} t^{}", d.coefficient, d.exponent());
    }
    // the kernel t^(γ−1) is annihilated
    let kernel = PowerTerm::new(1.0, 1.75, 0.0)?;
    println!(
        "D^(1.5,1.75) t^0.75 is zero: {}",
        hilfer_power(kernel, 1.5, 1.75)?.is_zero()
    );

    let f = SampledFn::graded(0.0, 1.0, 2000, 2.0, |s| s * s)?;
    let num = rl_integral_numeric(&f, 0.5, 1.0, 1e-6)?;
    println!(
        "numerical I^0.5 t^2 at 1 = {:.8} (closed form {:.8})",
        num.value,
        i.eval(1.0)
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
