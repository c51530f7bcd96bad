//! Reproduce the μ = 17/4, K = 20 table of the simple expansion.

use genbessel::cli_harness::table1;

fn main() -> genbessel::Result<()> {
    let rows = table1(60)?;
    println!("{:>4} {:>6} {:>12} {:>10} {:>10}", "n", "z", "Y", "delta", "printed");
    for r in &rows {
        println!("{:>4} {:>6} {:>12} {:>10.2e} {:>10}", r.n, r.z, r.y_text(), r.delta, r.printed_delta_text);
    }
    let bad = rows.iter().filter(|r| !r.y_matches() || !r.delta_within(3.0)).count();
    println!("{} of {} cells agree", rows.len() - bad, rows.len());
    Ok(())
}
