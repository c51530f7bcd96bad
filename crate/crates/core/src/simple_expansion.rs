//! Large-n expansion of Y_n^μ(z) in Laguerre polynomials,
//!
//! ```text
//! Y_n^μ(z) ~ (2z)^n 2^μ e^{1/z} Σ_k L_k^{-μ-k}(1/z) (1/2 - k/2)_n,
//! ```
//!
//! usable for |z| bounded away from the origin.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact_core::{pochhammer, EvalReport, Method, PolyParams};
use crate::scaled_arith::big::big_to_f64;
use crate::scaled_arith::{BigComplex, BigCtx};

/// Truncation index used by default (terms k = 0..=20).
pub const DEFAULT_K: usize = 20;

/// Below this modulus the expansion is still evaluated but flagged.
pub const SMALL_Z: f64 = 0.1;

/// c_k = L_k^{-μ-k}(1/z) for k = 0..=K.
#[derive(Clone, Debug)]
pub struct LaguerreCoeffs {
    pub mu: f64,
    pub z: Complex64,
    pub coeffs: Vec<BigComplex>,
}

impl LaguerreCoeffs {
    /// Relative residual of `z(k+1)c_{k+1} + (μz+kz+1)c_k + c_{k-1}` for `1 ≤ k < K`.
    pub fn recurrence_residual(&self, k: usize, ctx: &BigCtx) -> f64 {
        let z = BigComplex::from_complex(self.z, ctx);
        let c = &self.coeffs;
        let a = z.mul_f64((k + 1) as f64, ctx).mul(&c[k + 1], ctx);
        let b = z.mul_f64(self.mu + k as f64, ctx).add(&BigComplex::one(ctx), ctx).mul(&c[k], ctx);
        let r = a.add(&b, ctx).add(&c[k - 1], ctx);
        let scale = ctx.add(&ctx.add(&a.abs(ctx), &b.abs(ctx)), &c[k - 1].abs(ctx));
        if scale.is_zero() {
            return 0.0;
        }
        big_to_f64(&ctx.div(&r.abs(ctx), &scale))
    }
}

pub fn laguerre_coeffs(mu: f64, z: Complex64, k_max: usize, ctx: &BigCtx) -> Result<LaguerreCoeffs> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let zb = BigComplex::from_complex(z, ctx);
    Ok(LaguerreCoeffs { mu, z, coeffs: laguerre_big(mu, &zb, k_max, ctx) })
}

pub(crate) fn laguerre_big(mu: f64, z: &BigComplex, k_max: usize, ctx: &BigCtx) -> Vec<BigComplex> {
    let one = BigComplex::one(ctx);
    let mut c = vec![one.clone()];
    if k_max == 0 {
        return c;
    }
    let mu_z = z.mul_f64(mu, ctx);
    c.push(mu_z.add(&one, ctx).div(z, ctx).neg());
    for k in 1..k_max {
        let lead = mu_z.add(&z.mul_f64(k as f64, ctx), ctx).add(&one, ctx);
        let num = lead.mul(&c[k], ctx).add(&c[k - 1], ctx).neg();
        c.push(num.div(&z.mul_f64((k + 1) as f64, ctx), ctx));
    }
    c
}

/// (1/2 − k/2)_n for k = 0..=K.
pub fn phi_pochhammer_ladder(n: u64, k_max: usize, ctx: &BigCtx) -> Result<Vec<BigComplex>> {
    if n == 0 {
        return Err(Error::InvalidArgument("ladder needs n >= 1".into()));
    }
    Ok((0..=k_max).map(|k| ladder_entry(n, k, ctx)).collect())
}

fn ladder_entry(n: u64, k: usize, ctx: &BigCtx) -> BigComplex {
    if k % 2 == 1 && (k as u64) < 2 * n {
        return BigComplex::zero(ctx);
    }
    pochhammer(&BigComplex::from_f64(0.5 - 0.5 * k as f64, ctx), n, ctx)
}

/// Value, error estimate and number of terms of the truncated expansion.
#[derive(Clone, Debug)]
pub struct SimpleValue {
    pub value: BigComplex,
    pub err_estimate: f64,
    pub terms: usize,
}

/// The expansion truncated after k = K, at big precision.
pub fn simple_big(n: u64, mu: f64, z: &BigComplex, k_max: usize, ctx: &BigCtx) -> Result<SimpleValue> {
    if z.is_zero() {
        return Err(Error::ZeroArgument);
    }
    // a few spare terms to locate the first omitted nonzero one
    let spare = 2 * n as usize + 4;
    let lookahead = (k_max + spare).min(k_max + 64);
    let c = laguerre_big(mu, z, lookahead, ctx);
    let mut sum = BigComplex::zero(ctx);
    for (k, ck) in c.iter().enumerate().take(k_max + 1) {
        let p = ladder_entry(n, k, ctx);
        if !p.is_zero() {
            sum = sum.add(&ck.mul(&p, ctx), ctx);
        }
    }
    let mut omitted = None;
    for (k, ck) in c.iter().enumerate().skip(k_max + 1) {
        let t = ck.mul(&ladder_entry(n, k, ctx), ctx);
        if !t.is_zero() {
            omitted = Some(t);
            break;
        }
    }
    let err_estimate = match omitted {
        Some(t) if !sum.is_zero() => big_to_f64(&ctx.div(&t.abs(ctx), &sum.abs(ctx))),
        Some(_) => f64::INFINITY,
        None => 0.0,
    };
    let two_z = z.mul_f64(2.0, ctx);
    let pre = two_z
        .powi(n as i64, ctx)
        .mul(&BigComplex::from_f64(2.0, ctx).powf(mu, ctx), ctx)
        .mul(&z.recip(ctx).exp(ctx), ctx);
    Ok(SimpleValue { value: pre.mul(&sum, ctx), err_estimate, terms: k_max + 1 })
}

/// Truncated expansion at `z` (the polynomial argument) with terms k = 0..=K.
pub fn eval_simple(params: &PolyParams, k_max: usize, ctx: &BigCtx) -> Result<EvalReport> {
    if params.z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let z = BigComplex::from_complex(params.z, ctx);
    let s = simple_big(params.n, params.mu, &z, k_max, ctx)?;
    let mut rep = EvalReport::new(s.value.to_scaled(), Method::Simple, s.terms, Some(s.err_estimate));
    if params.z.norm() < SMALL_Z {
        rep = rep.with_note("|z| < 0.1: expansion degrades near the origin");
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::exact_sum_big;

    fn ctx() -> BigCtx {
        BigCtx::default()
    }

    /// L_k^{α}(x) = Σ_m C(k+α, k−m)(−x)^m/m! with α = −μ−k.
    fn laguerre_direct(k: usize, mu: f64, z: Complex64, ctx: &BigCtx) -> BigComplex {
        let x = BigComplex::from_complex(z, ctx).recip(ctx).neg();
        let top = -mu;
        let mut acc = BigComplex::zero(ctx);
        for m in 0..=k {
            let j = k - m;
            let mut binom = BigComplex::one(ctx);
            for i in 0..j {
                binom = binom.mul_f64((top - i as f64) / (i + 1) as f64, ctx);
            }
            let mut p = BigComplex::one(ctx);
            for i in 1..=m {
                p = p.mul(&x, ctx).mul_f64(1.0 / i as f64, ctx);
            }
            acc = acc.add(&binom.mul(&p, ctx), ctx);
        }
        acc
    }

    #[test]
    fn first_coefficients() {
        let c = ctx();
        let l = laguerre_coeffs(2.0, Complex64::new(1.0, 0.0), 3, &c).unwrap();
        assert!(l.coeffs[0].rel_diff(&BigComplex::one(&c), &c) == 0.0);
        assert!(l.coeffs[1].rel_diff(&BigComplex::from_f64(-3.0, &c), &c) < 1e-55);
        let d = laguerre_direct(2, 2.0, Complex64::new(1.0, 0.0), &c);
        assert!(l.coeffs[2].rel_diff(&d, &c) < 1e-50);
        let l = laguerre_coeffs(0.0, Complex64::new(2.0, 0.0), 3, &c).unwrap();
        assert!((l.coeffs[3].to_complex().re + 1.0 / 48.0).abs() < 1e-17);
        assert!(laguerre_coeffs(1.0, Complex64::new(0.0, 0.0), 3, &c).is_err());
    }

    #[test]
    fn recurrence_residuals_are_small() {
        let c = ctx();
        let l = laguerre_coeffs(4.25, Complex64::new(-0.3, 0.8), 20, &c).unwrap();
        for k in 1..20 {
            assert!(l.recurrence_residual(k, &c) < 1e-52);
        }
    }

    #[test]
    fn ladder_values() {
        let c = ctx();
        let l = phi_pochhammer_ladder(2, 5, &c).unwrap();
        assert!(l[0].rel_diff(&BigComplex::from_f64(0.75, &c), &c) == 0.0);
        assert!(l[1].is_zero() && l[3].is_zero());
        assert!(!l[5].is_zero());
        let l = phi_pochhammer_ladder(9, 8, &c).unwrap();
        for k in 0..3 {
            let ratio = l[2 * k + 2].div(&l[2 * k], &c).to_complex().re;
            let kf = k as f64;
            assert!((ratio - (-0.5 - kf) / (9.0 - kf - 0.5)).abs() < 1e-15);
        }
        assert!(phi_pochhammer_ladder(0, 3, &c).is_err());
    }

    #[test]
    fn relative_errors_at_two_table_points() {
        let c = ctx();
        for &(n, z, expect) in &[(50u64, 10.0, 1.7e-8), (100, -0.1, 6.8e-16)] {
            let zb = BigComplex::from_f64(z, &c);
            let s = simple_big(n, 4.25, &zb, DEFAULT_K, &c).unwrap();
            let y = exact_sum_big(n, 4.25, &zb, &c).unwrap().value;
            let d = s.value.rel_diff(&y, &c);
            assert!(d / expect < 1.05 && d / expect > 0.95, "n={n} z={z}: {d:e}");
        }
    }

    #[test]
    fn mu_zero_series_converges() {
        let c = ctx();
        let zb = BigComplex::from_f64(3.0, &c);
        let y = exact_sum_big(10, 0.0, &zb, &c).unwrap().value;
        let s = simple_big(10, 0.0, &zb, 30, &c).unwrap();
        assert!(s.value.rel_diff(&y, &c) < 1e-40);
        let s = simple_big(10, 0.0, &zb, 21, &c).unwrap();
        assert!(s.value.rel_diff(&y, &c) < 1e-30);
    }

    #[test]
    fn small_argument_is_flagged() {
        let c = ctx();
        let r = eval_simple(&PolyParams::real(50, 4.25, 0.05), DEFAULT_K, &c).unwrap();
        assert!(r.notes.contains("origin"));
        assert_eq!(r.terms_used, 21);
        assert!(eval_simple(&PolyParams::real(50, 4.25, 0.0), DEFAULT_K, &c).is_err());
    }
}
