//! Values far outside the double range, and the cost of cancellation.

use genbessel::exact_core::{eval_exact_sum, exact_sum_adaptive, PolyParams};
use genbessel::scaled_arith::{factorial_over_gamma, BigCtx, ScaledComplex};
use num_complex::Complex64;

fn main() -> genbessel::Result<()> {
    let ctx = BigCtx::new(60);
    let big = ScaledComplex::from_f64(1e300) * ScaledComplex::from_f64(1e300);
    println!("1e300 * 1e300 = {}", big.to_decimal_string(4));
    let r = factorial_over_gamma(500, 4.25, &ctx)?.to_scaled();
    println!("500!/Gamma(505.25) = {}", r.to_decimal_string(10));
    let y = eval_exact_sum(&PolyParams::real(1000, 4.25, 1000.0), &ctx)?;
    println!("Y_1000(1000) = {}", y.value.to_decimal_string(6));
    let p = PolyParams::new(300, 0.5, Complex64::new(-0.02, 0.001));
    let lo = eval_exact_sum(&p, &ctx)?;
    println!("alternating sum at 60 digits: err {:.1e} {}", lo.err_estimate.unwrap(), lo.notes);
    let (hi, digits) = exact_sum_adaptive(p.n, p.mu, p.z, 1e-30, &ctx, 960)?;
    println!(
        "adaptive ({digits} digits): {} with err {:.1e}",
        hi.value.to_scaled().to_decimal_string(10),
        hi.err_estimate
    );
    Ok(())
}
