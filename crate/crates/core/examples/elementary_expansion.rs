//! Saddle-point expansions in elementary functions for ζ = 1/(νz), and the
//! F + U split of Y_n^μ(−ζ).

use genbessel::elementary_expansion::{eval_thm2, eval_thm3, SectorOptions};
use genbessel::exact_core::{exact_at_zeta, PolyParams};
use genbessel::scaled_arith::BigCtx;
use num_complex::Complex64;

fn main() -> genbessel::Result<()> {
    let ctx = BigCtx::new(60);
    let opts = SectorOptions::default();
    let mu = 17.0 / 4.0;
    println!("positive side, z = 1, K = 4");
    for n in [50u64, 100, 200] {
        let p = PolyParams::new(n, mu, Complex64::new(1.0, 0.0));
        let r = eval_thm2(&p, 4, &opts)?;
        let exact = exact_at_zeta(n, mu, p.z, false, &ctx)?.value.to_scaled();
        println!("  n = {n:>3}: error {:.2e}, estimate {:.2e}", r.value.rel_diff(&exact), r.err_estimate.unwrap());
    }
    println!("negative side, z = 1.5 + 0.5i, n = 80");
    let p = PolyParams::new(80, mu, Complex64::new(1.5, 0.5));
    let t = eval_thm3(&p, 6, &opts)?;
    let exact = exact_at_zeta(80, mu, p.z, true, &ctx)?.value.to_scaled();
    println!("  F = {}", t.f.value.to_decimal_string(6));
    println!("  U = {}", t.u.value.to_decimal_string(6));
    println!("  F + U error {:.2e}", t.y.value.rel_diff(&exact));
    let refused = eval_thm2(&PolyParams::new(80, mu, Complex64::new(0.0, 1.0)), 4, &opts);
    println!("at z = i: {}", refused.unwrap_err());
    Ok(())
}
