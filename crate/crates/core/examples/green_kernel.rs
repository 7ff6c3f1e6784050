// The Green kernel, its diagonal maximum and the minorant on the middle half.

use fracbvp::green::GreenKernel;

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let k = GreenKernel::new(0.0, 1.0, 1.75, 2.0)?;
    let m = k.diag_max();
    println!("max G(s,s) = {:.12} at s* = {:.12}", m.value, m.s_star);
    println!(
        "golden-section check: {:.12} at {:.12}",
        m.golden_value, m.golden_s
    );

    let phi = k.minorant()?;
    println!("crossing point r = {:.10}", phi.r);
    for s in [0.3, 0.5, 0.7, 0.9] {
        println!(
            "phi({s}) = {:.6}   G({s},{s}) = {:.6}",
            phi.phi(s)?,
            k.diagonal(s)
        );
    }

    print!("G(t, 0.4):");
    for i in 0..=10 {
        print!(" {:.4}", k.eval(i as f64 / 10.0, 0.4));
    }
    println!();
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
