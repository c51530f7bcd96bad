//! Near z = ±i the saddles coalesce: the elementary expansions refuse, the
//! expansion in K_ν and K′_ν keeps working.

use genbessel::bessel_type_expansion::{eval_thm4, ibp_coeffs, BesselSource};
use genbessel::elementary_expansion::{eval_thm2, SectorOptions};
use genbessel::exact_core::{exact_at_zeta, PolyParams};
use genbessel::scaled_arith::BigCtx;
use num_complex::Complex64;

fn main() -> genbessel::Result<()> {
    let ctx = BigCtx::new(60);
    let (n, mu) = (60u64, 17.0 / 4.0);
    let co = ibp_coeffs(Complex64::new(0.0, 1.0), mu, 2, 12)?;
    let show = |v: &[Complex64]| v.iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>().join(", ");
    println!("z = i: C = [{}]", show(&co.c));
    println!("       D = [{}]", show(&co.d));
    for th in [-0.2, -0.05, 0.0, 0.05, 0.2] {
        let z = Complex64::from_polar(0.98, std::f64::consts::FRAC_PI_2 + th);
        let p = PolyParams::new(n, mu, z);
        let exact = exact_at_zeta(n, mu, z, false, &ctx)?.value.to_scaled();
        let b = eval_thm4(&p, 3, BesselSource::ExactHalfInteger, &ctx)?;
        let e = match eval_thm2(&p, 3, &SectorOptions::default()) {
            Ok(r) => format!("{:.1e}", r.value.rel_diff(&exact)),
            Err(e) => format!("refused ({e})"),
        };
        println!("z = {z:.3}: Bessel-type {:.1e}, elementary {e}", b.value.rel_diff(&exact));
    }
    Ok(())
}
