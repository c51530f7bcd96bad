//! Recurrences, derivative identities and the two routes to F.

use genbessel::exact_core::{
    derivative_check, exact_sum_big, kummer_split, recurrence_mu_check, recurrence_n_big, split_f_transformed,
    PolyParams,
};
use genbessel::scaled_arith::{BigComplex, BigCtx};
use num_complex::Complex64;

fn main() -> genbessel::Result<()> {
    let ctx = BigCtx::new(60);
    let p = PolyParams::new(40, 0.3, Complex64::new(0.7, -0.4));
    let zb = BigComplex::from_complex(p.z, &ctx);
    let rec = recurrence_n_big(p.n, p.mu, &zb, &ctx)?;
    let sum = exact_sum_big(p.n, p.mu, &zb, &ctx)?.value;
    println!("recurrence in n vs sum   {:.1e}", rec.rel_diff(&sum, &ctx));
    println!("recurrence in mu         {:.1e}", recurrence_mu_check(&p, &ctx)?);
    let (a, b) = derivative_check(&p, &ctx)?;
    println!("derivative identities    {a:.1e} {:.1e}", b.unwrap());
    let q = PolyParams::new(40, 0.3, Complex64::new(1.2, 0.3));
    let s = kummer_split(&q, 1e-40, &ctx)?;
    let f2 = split_f_transformed(q.n, q.mu, q.z, &ctx)?;
    println!("F by two routes          {:.1e}", s.f.rel_diff(&f2, &ctx));
    println!("Y = F + U: F = {}, U = {}", s.f_scaled().to_decimal_string(8), s.u_scaled().to_decimal_string(8));
    Ok(())
}
