//! Coefficient families as exact rationals or complex values.

use genbessel::bessel_type_expansion::{default_len, ibp_coeffs};
use genbessel::bessel_uniform::gen_vk;
use genbessel::cli_harness::fmt_complex;
use genbessel::elementary_expansion::{abc_coeffs, revert_mapping, saddle_geometry};
use genbessel::scaled_arith::gamma_star_polys;
use num_complex::Complex64;

fn main() -> genbessel::Result<()> {
    for (k, g) in gamma_star_polys(3).iter().enumerate() {
        println!("gamma_{k}(mu) = {}", g.to_text("mu"));
    }
    for (k, v) in gen_vk(2).iter().enumerate() {
        println!("v_{k}(t) = {}", v.to_text("t"));
    }
    let z = Complex64::new(2.0, 0.0);
    let g = saddle_geometry(z)?;
    let s = revert_mapping(&g, 4)?;
    println!("s(w) at z = 2: {:.10?}", s.coeffs.iter().map(|c| c.re).collect::<Vec<_>>());
    let (a, b, c) = abc_coeffs(&g, 17.0 / 4.0, 3)?;
    let show = |v: &[Complex64]| v.iter().map(|c| fmt_complex(*c)).collect::<Vec<_>>().join(", ");
    println!("A = [{}]\nB = [{}]\nC = [{}]", show(&a.values), show(&b.values), show(&c.values));
    let co = ibp_coeffs(z, -1.0, 3, default_len(3))?;
    println!("mu = -1: C = [{}], D = [{}]", show(&co.c), show(&co.d));
    Ok(())
}
