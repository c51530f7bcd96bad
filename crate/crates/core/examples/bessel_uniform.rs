//! Uniform large-order expansions of K_ν(νz), I_ν(νz) and their derivatives,
//! checked against half-integer values from the Bessel polynomials.

use genbessel::bessel_uniform::{eval_bessel_uniform, exact_half_integer, gen_uk, BesselKind};
use genbessel::scaled_arith::BigCtx;
use num_complex::Complex64;

fn main() -> genbessel::Result<()> {
    let ctx = BigCtx::new(60);
    let u = gen_uk(3);
    for (k, p) in u.iter().enumerate() {
        println!("u_{k}(t) = {}", p.to_text("t"));
    }
    let (n, z) = (40u64, Complex64::new(1.3, 0.4));
    let nu = n as f64 + 0.5;
    for kind in [BesselKind::K, BesselKind::I, BesselKind::Kprime, BesselKind::Iprime] {
        let a = eval_bessel_uniform(kind, nu, z, 4)?;
        let e = exact_half_integer(kind, n, nu * z, &ctx)?;
        println!("{kind:?}: {}  error {:.1e}", a.value.to_decimal_string(8), a.value.rel_diff(&e));
    }
    let k = exact_half_integer(BesselKind::K, n, nu * z, &ctx)?;
    let i = exact_half_integer(BesselKind::I, n, nu * z, &ctx)?;
    let kp = exact_half_integer(BesselKind::Kprime, n, nu * z, &ctx)?;
    let ip = exact_half_integer(BesselKind::Iprime, n, nu * z, &ctx)?;
    let w = (k * ip - kp * i).to_complex() * nu * z;
    println!("x (K I' - K' I) = {w:.15}");
    Ok(())
}
