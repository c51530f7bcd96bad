//! Convergence of the Laguerre-type expansion in the number of terms.

use genbessel::exact_core::exact_sum_big;
use genbessel::scaled_arith::{BigComplex, BigCtx};
use genbessel::simple_expansion::{laguerre_coeffs, simple_big};
use num_complex::Complex64;

fn main() -> genbessel::Result<()> {
    let ctx = BigCtx::new(60);
    let (n, mu) = (100, 4.25);
    for z in [10.0, 1.0, -0.1] {
        let zb = BigComplex::from_f64(z, &ctx);
        let exact = exact_sum_big(n, mu, &zb, &ctx)?.value;
        print!("z = {z:>5}:");
        for k in [4, 8, 12, 16, 20] {
            let s = simple_big(n, mu, &zb, k, &ctx)?;
            print!("  K={k}: {:.1e}", s.value.rel_diff(&exact, &ctx));
        }
        println!();
    }
    let c = laguerre_coeffs(mu, Complex64::new(2.0, 0.0), 4, &ctx)?;
    for (k, v) in c.coeffs.iter().enumerate() {
        println!("c_{k} = L_{k}^(-mu-{k})(1/2) = {:.12}", v.to_complex().re);
    }
    Ok(())
}
