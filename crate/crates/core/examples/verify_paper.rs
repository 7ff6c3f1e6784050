// Recompute the published constants and list where they disagree.

use fracbvp::cli::verify::{paper_report, Status};

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let report = paper_report()?;
    for row in &report.rows {
        println!(
            "{:<50} {:>24} {:>24}  {}",
            row.quantity, row.paper, row.computed, row.status
        );
    }
    let n = report
        .rows
        .iter()
        .filter(|r| r.status == Status::Discrepancy)
        .count();
    println!("{n} discrepancies");
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
