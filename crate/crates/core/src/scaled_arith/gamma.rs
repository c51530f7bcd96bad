//! Gamma-function utilities: the Γ* expansion coefficients γ_k(α) and a
//! configurable-precision Γ(x) for real `x > 0`.
//!
//! The γ_k are produced exactly as polynomials in μ = α − 1/2 from the
//! asymptotic series of `ln Γ(ν+α)` in Bernoulli polynomials,
//!
//! ```text
//! ln Γ*(ν+α) ~ Σ_{m≥2} (-1)^m B_m(α) / (m(m-1) ν^(m-1)),
//! ```
//!
//! followed by exponentiation of the power series in 1/ν.

use std::sync::{Mutex, OnceLock};

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::big::{big_to_f64, BigComplex, BigCtx};
use crate::error::{Error, Result};
use crate::rational_poly::{rat, RationalPoly};

/// Exact Bernoulli numbers B_0..B_m (with B_1 = -1/2).
pub fn bernoulli_numbers(m: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut b = cache.lock().unwrap();
    while b.len() <= m {
        let n = b.len();
        // Σ_{j<n+1} C(n+1, j) B_j = 0
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b[..=m].to_vec()
}

/// Bernoulli polynomial B_m(μ + 1/2) as a polynomial in μ.
fn bernoulli_poly_shifted(m: usize, b: &[BigRational]) -> RationalPoly {
    let mut coeffs = vec![BigRational::zero(); m + 1];
    let mut binom = BigInt::one();
    for (j, bj) in b.iter().enumerate().take(m + 1) {
        coeffs[m - j] = bj * BigRational::from_integer(binom.clone());
        binom = binom * BigInt::from(m - j) / BigInt::from(j + 1);
    }
    RationalPoly::new(coeffs).shift(&rat(1, 2))
}

/// γ_0..γ_K of Γ*(ν + μ + 1/2) as exact polynomials in μ.
pub fn gamma_star_polys(k_max: usize) -> Vec<RationalPoly> {
    let b = bernoulli_numbers(k_max + 1);
    // l_k: coefficient of ν^{-k} in ln Γ*
    let logs: Vec<RationalPoly> = (0..=k_max)
        .map(|k| {
            if k == 0 {
                return RationalPoly::zero();
            }
            let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
            bernoulli_poly_shifted(k + 1, &b).scale(&rat(sign, (k * (k + 1)) as i64))
        })
        .collect();
    let mut g = vec![RationalPoly::one()];
    for k in 1..=k_max {
        let mut acc = RationalPoly::zero();
        for j in 1..=k {
            acc = &acc + &(&logs[j] * &g[k - j]).scale(&rat(j as i64, 1));
        }
        g.push(acc.scale(&rat(1, k as i64)));
    }
    g
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaStarCoeffs {
    pub alpha: f64,
    pub coeffs: Vec<f64>,
}

impl GammaStarCoeffs {
    /// Σ γ_k / ν^k.
    pub fn sum(&self, nu: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, g| acc / nu + g)
    }
}

/// γ_0(α)..γ_K(α) of the slowly varying part of Γ(ν + α).
pub fn gamma_star_series(alpha: f64, k: i64) -> Result<GammaStarCoeffs> {
    if k < 0 {
        return Err(Error::InvalidArgument(format!("order K = {k} must be nonnegative")));
    }
    let mu = alpha - 0.5;
    let coeffs = gamma_star_polys(k as usize).iter().map(|p| p.eval_f64(mu)).collect();
    Ok(GammaStarCoeffs { alpha, coeffs })
}

fn rational_to_big(r: &BigRational, ctx: &BigCtx) -> BigFloat {
    ctx.div(&ctx.bigint(r.numer()), &ctx.bigint(r.denom()))
}

/// `ln Γ(y)` for `y` large enough that the Stirling series reaches
/// `10^-(P+5)`; returns `None` when it does not.
fn ln_gamma_stirling(yb: &BigFloat, ctx: &BigCtx) -> Option<BigFloat> {
    let yb = yb.clone();
    let half = ctx.real(0.5);
    let two_pi = ctx.mul(&ctx.pi(), &ctx.int(2));
    let mut acc = ctx.sub(&ctx.mul(&ctx.sub(&yb, &half), &ctx.ln(&yb)), &yb);
    acc = ctx.add(&acc, &ctx.mul(&ctx.ln(&two_pi), &half));
    let tol = 10f64.powi(-(ctx.digits() as i32) - 5);
    let max_terms = 200;
    let b = bernoulli_numbers(2 * max_terms);
    let y2 = ctx.mul(&yb, &yb);
    let mut ypow = yb.clone();
    for j in 1..=max_terms {
        let coef = &b[2 * j] / BigRational::from_integer(BigInt::from((2 * j) * (2 * j - 1)));
        let term = ctx.div(&rational_to_big(&coef, ctx), &ypow);
        acc = ctx.add(&acc, &term);
        if big_to_f64(&term).abs() < tol {
            return Some(acc);
        }
        ypow = ctx.mul(&ypow, &y2);
    }
    None
}

/// Γ(x) for real `x > 0` at the context precision.
///
/// The argument is promoted by the recurrence Γ(x) = Γ(x+m)/(x)_m until it
/// reaches `max(30, 0.6 P)`, where the Stirling series converges to the
/// working tolerance.
pub fn gamma_real(x: f64, ctx: &BigCtx) -> Result<BigComplex> {
    gamma_shifted(x, 0.0, ctx)
}

/// Γ(x + k) with the integer-valued shift `k` added at big precision.
pub fn gamma_shifted(x: f64, k: f64, ctx: &BigCtx) -> Result<BigComplex> {
    let xs = x + k;
    if !xs.is_finite() || xs <= 0.0 {
        return Err(Error::InvalidArgument(format!("gamma_real needs x > 0, got {xs}")));
    }
    let xb = ctx.add(&ctx.real(x), &ctx.real(k));
    let mut threshold = (0.6 * ctx.digits() as f64).max(30.0);
    loop {
        let m = (threshold - xs).ceil().max(0.0) as i64;
        let y = ctx.add(&xb, &ctx.int(m));
        if let Some(lg) = ln_gamma_stirling(&y, ctx) {
            let mut g = ctx.exp(&lg);
            let mut den = ctx.int(1);
            for i in 0..m {
                den = ctx.mul(&den, &ctx.add(&xb, &ctx.int(i)));
            }
            g = ctx.div(&g, &den);
            return Ok(BigComplex::from_real(g, ctx));
        }
        threshold *= 2.0;
    }
}

/// `n! / Γ(n + μ + 1)` for `n + μ + 1 > 0`, as a product of ratios and a
/// single small gamma value so that neither huge gamma is formed.
pub fn factorial_over_gamma(n: u64, mu: f64, ctx: &BigCtx) -> Result<BigComplex> {
    if mu.is_nan() || n as f64 + mu + 1.0 <= 0.0 {
        return Err(Error::Domain(format!("n + mu + 1 = {} must be positive", n as f64 + mu + 1.0)));
    }
    // smallest m ≤ n with μ + 1 + m > 0
    let m = if mu + 1.0 > 0.0 { 0 } else { (-(mu + 1.0)).floor() as u64 + 1 };
    let mut acc = ctx.int(1);
    for k in m + 1..=n {
        acc = ctx.mul(&acc, &ctx.div(&ctx.int(k as i64), &ctx.add(&ctx.real(mu), &ctx.int(k as i64))));
    }
    let mut fact_m = ctx.int(1);
    for k in 2..=m {
        fact_m = ctx.mul(&fact_m, &ctx.int(k as i64));
    }
    let g = gamma_shifted(mu, 1.0 + m as f64, ctx)?;
    Ok(BigComplex::from_real(ctx.div(&ctx.mul(&acc, &fact_m), &g.re), ctx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
        assert!(b[11].is_zero());
    }

    #[test]
    fn gamma_star_low_orders() {
        let g = gamma_star_polys(2);
        assert_eq!(g[0], RationalPoly::one());
        assert_eq!(g[1].to_text("mu"), "(-1+12*mu^2)/24");
        let c = gamma_star_series(0.5, 1).unwrap();
        assert_eq!(c.coeffs, vec![1.0, -1.0 / 24.0]);
        assert!(gamma_star_series(0.5, -1).is_err());
    }

    #[test]
    fn gamma_star_matches_gamma_ratio() {
        // Γ*(ν+α) against its definition with big gamma at ν = 40
        let ctx = BigCtx::new(40);
        let nu = 40.0;
        let alpha = 4.75;
        let g = gamma_real(nu + alpha, &ctx).unwrap().to_complex().re;
        let direct = g / ((2.0 * std::f64::consts::PI).sqrt() * nu.powf(nu + alpha - 0.5) * (-nu).exp());
        let series = gamma_star_series(alpha, 8).unwrap().sum(nu);
        assert!((series / direct - 1.0).abs() < 1e-13, "{series} vs {direct}");
    }

    #[test]
    fn gamma_real_examples() {
        let ctx = BigCtx::default();
        let tol = 1e-55;
        let one = BigComplex::one(&ctx);
        assert!(gamma_real(1.0, &ctx).unwrap().rel_diff(&one, &ctx) < tol);
        let fact4 = BigComplex::from_i64(24, &ctx);
        assert!(gamma_real(5.0, &ctx).unwrap().rel_diff(&fact4, &ctx) < tol);
        // Γ(1.5) = Γ(0.5)/2 = √π/2
        let half_sqrt_pi = BigComplex::from_real(ctx.sqrt(&ctx.pi()), &ctx).mul_f64(0.5, &ctx);
        assert!(gamma_real(1.5, &ctx).unwrap().rel_diff(&half_sqrt_pi, &ctx) < tol);
        assert!(gamma_real(0.0, &ctx).is_err());
        assert!(gamma_real(-2.5, &ctx).is_err());
    }

    #[test]
    fn gamma_functional_equation_on_grid() {
        let ctx = BigCtx::default();
        let bound = 10f64.powi(5 - ctx.digits() as i32);
        for i in 1..=40 {
            let x = 0.25 * i as f64;
            let g = gamma_real(x, &ctx).unwrap();
            let g1 = gamma_real(x + 1.0, &ctx).unwrap();
            assert!(g1.rel_diff(&g.mul_f64(x, &ctx), &ctx) < bound, "x = {x}");
        }
    }

    #[test]
    fn factorial_ratio_handles_negative_mu() {
        let ctx = BigCtx::default();
        // μ = -1: n!/Γ(n) = n
        let r = factorial_over_gamma(30, -1.0, &ctx).unwrap();
        assert!(r.rel_diff(&BigComplex::from_i64(30, &ctx), &ctx) < 1e-55);
        let r0 = factorial_over_gamma(30, 0.0, &ctx).unwrap();
        assert!(r0.rel_diff(&BigComplex::one(&ctx), &ctx) < 1e-55);
        // μ = 1/2, n = 1: 1/Γ(2.5) = 4/(3√π)
        let r = factorial_over_gamma(1, 0.5, &ctx).unwrap().to_complex().re;
        assert!((r - 4.0 / (3.0 * std::f64::consts::PI.sqrt())).abs() < 1e-15);
        assert!(factorial_over_gamma(1, -2.0, &ctx).is_err());
    }
}
