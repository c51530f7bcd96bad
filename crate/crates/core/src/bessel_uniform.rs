//! Uniform large-ν expansions of K_ν(νz), I_ν(νz) and their derivatives,
//! with the polynomials u_k(t), v_k(t) generated in exact rationals, and
//! exact half-integer K, I from the finite sums of Y_n^0.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_core::exact_sum_big;
use crate::rational_poly::{rat, RationalPoly};
use crate::scaled_arith::{BigComplex, BigCtx, ScaledComplex};

pub const DEFAULT_DELTA: f64 = 0.05;

fn uk_cache() -> &'static Mutex<Vec<RationalPoly>> {
    static CACHE: OnceLock<Mutex<Vec<RationalPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![RationalPoly::one()]))
}

/// u_0..u_K from u_{k+1} = ½t²(1−t²)u_k′ + ⅛∫₀ᵗ(1−5s²)u_k(s)ds.
pub fn gen_uk(k_max: usize) -> Vec<RationalPoly> {
    let mut u = uk_cache().lock().unwrap();
    let half_t2_1mt2 = RationalPoly::new(vec![rat(0, 1), rat(0, 1), rat(1, 2), rat(0, 1), rat(-1, 2)]);
    let one_m5s2 = RationalPoly::new(vec![rat(1, 1), rat(0, 1), rat(-5, 1)]);
    while u.len() <= k_max {
        let prev = u.last().unwrap();
        let a = &half_t2_1mt2 * &prev.derivative();
        let b = (&one_m5s2 * prev).integral().scale(&rat(1, 8));
        let next = &a + &b;
        u.push(next);
    }
    u[..=k_max].to_vec()
}

/// v_0..v_K from v_k = u_k + t(t²−1)(½u_{k−1} + t u_{k−1}′).
pub fn gen_vk(k_max: usize) -> Vec<RationalPoly> {
    let u = gen_uk(k_max);
    let t_t2m1 = RationalPoly::new(vec![rat(0, 1), rat(-1, 1), rat(0, 1), rat(1, 1)]);
    let t = RationalPoly::x();
    let mut v = vec![RationalPoly::one()];
    for k in 1..=k_max {
        let inner = &u[k - 1].scale(&rat(1, 2)) + &(&t * &u[k - 1].derivative());
        v.push(&u[k] + &(&t_t2m1 * &inner));
    }
    v
}

pub fn uk_eval(p: &RationalPoly, t: Complex64) -> Complex64 {
    p.eval_complex(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BesselKind {
    K,
    I,
    Kprime,
    Iprime,
}

/// A value of a uniform expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct BesselValue {
    pub kind: BesselKind,
    pub value: ScaledComplex,
    pub terms_used: usize,
    /// Relative size of the first omitted term.
    pub err_estimate: f64,
}

/// Uniform expansion of the chosen function at argument νz with terms k = 0..=K.
pub fn eval_bessel_uniform(kind: BesselKind, nu: f64, z: Complex64, k_max: usize) -> Result<BesselValue> {
    eval_bessel_uniform_in(kind, nu, z, k_max, DEFAULT_DELTA)
}

pub fn eval_bessel_uniform_in(
    kind: BesselKind,
    nu: f64,
    z: Complex64,
    k_max: usize,
    delta: f64,
) -> Result<BesselValue> {
    if nu.is_nan() || nu <= 0.0 {
        return Err(Error::InvalidArgument(format!("nu = {nu} must be positive")));
    }
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let limit = FRAC_PI_2 - delta;
    if z.arg().abs() > limit {
        return Err(Error::SectorViolation { phase: z.arg().abs(), limit });
    }
    let root = (1.0 + z * z).sqrt();
    let t = 1.0 / root;
    let eta = root + (z / (1.0 + root)).ln();
    let polys = match kind {
        BesselKind::K | BesselKind::I => gen_uk(k_max + 1),
        BesselKind::Kprime | BesselKind::Iprime => gen_vk(k_max + 1),
    };
    let alternating = matches!(kind, BesselKind::K | BesselKind::Kprime);
    let terms: Vec<Complex64> = polys
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let sign = if alternating && k % 2 == 1 { -1.0 } else { 1.0 };
            sign * uk_eval(p, t) / nu.powi(k as i32)
        })
        .collect();
    let sum: Complex64 = terms[..=k_max].iter().sum();
    let err_estimate = terms[k_max + 1].norm() / sum.norm();
    let quarter = 0.5 * root.ln();
    let ln_front = match kind {
        BesselKind::K => 0.5 * (PI / (2.0 * nu)).ln() - nu * eta - quarter,
        BesselKind::I => -0.5 * (2.0 * PI * nu).ln() + nu * eta - quarter,
        BesselKind::Kprime => 0.5 * (PI / (2.0 * nu)).ln() - nu * eta + quarter - z.ln(),
        BesselKind::Iprime => -0.5 * (2.0 * PI * nu).ln() + nu * eta + quarter - z.ln(),
    };
    let mut value = ScaledComplex::exp(ln_front).mul_complex(sum);
    if kind == BesselKind::Kprime {
        value = -value;
    }
    Ok(BesselValue { kind, value, terms_used: k_max + 1, err_estimate })
}

fn check_x(x: &BigComplex) -> Result<()> {
    if x.is_zero() {
        Err(Error::ZeroArgument)
    } else {
        Ok(())
    }
}

/// K_{n+1/2}(x) = √(π/(2x)) e^{−x} Y_n^0(1/x).
pub fn half_integer_k_big(n: u64, x: &BigComplex, ctx: &BigCtx) -> Result<BigComplex> {
    check_x(x)?;
    let y = exact_sum_big(n, 0.0, &x.recip(ctx), ctx)?.value;
    let pi = BigComplex::from_real(ctx.pi(), ctx);
    let pre = pi.div(&x.mul_f64(2.0, ctx), ctx).powf(0.5, ctx).mul(&x.neg().exp(ctx), ctx);
    Ok(pre.mul(&y, ctx))
}

/// I_{n+1/2}(x) = (e^x Y_n^0(−1/x) − (−1)^n e^{−x} Y_n^0(1/x)) / √(2πx).
pub fn half_integer_i_big(n: u64, x: &BigComplex, ctx: &BigCtx) -> Result<BigComplex> {
    check_x(x)?;
    let inv = x.recip(ctx);
    let yp = exact_sum_big(n, 0.0, &inv, ctx)?.value;
    let ym = exact_sum_big(n, 0.0, &inv.neg(), ctx)?.value;
    let mut second = x.neg().exp(ctx).mul(&yp, ctx);
    if n % 2 == 1 {
        second = second.neg();
    }
    let num = x.exp(ctx).mul(&ym, ctx).sub(&second, ctx);
    let pi = BigComplex::from_real(ctx.pi(), ctx);
    let den = pi.mul(x, ctx).mul_f64(2.0, ctx).powf(0.5, ctx);
    Ok(num.div(&den, ctx))
}

/// K′_{n+1/2}(x) = ((n+1/2)/x) K_{n+1/2}(x) − K_{n+3/2}(x).
pub fn half_integer_kprime_big(n: u64, x: &BigComplex, ctx: &BigCtx) -> Result<BigComplex> {
    let k0 = half_integer_k_big(n, x, ctx)?;
    let k1 = half_integer_k_big(n + 1, x, ctx)?;
    Ok(k0.mul_f64(n as f64 + 0.5, ctx).div(x, ctx).sub(&k1, ctx))
}

/// I′_{n+1/2}(x) = I_{n+3/2}(x) + ((n+1/2)/x) I_{n+1/2}(x).
pub fn half_integer_iprime_big(n: u64, x: &BigComplex, ctx: &BigCtx) -> Result<BigComplex> {
    let i0 = half_integer_i_big(n, x, ctx)?;
    let i1 = half_integer_i_big(n + 1, x, ctx)?;
    Ok(i1.add(&i0.mul_f64(n as f64 + 0.5, ctx).div(x, ctx), ctx))
}

pub fn exact_half_integer_k(n: u64, x: Complex64, ctx: &BigCtx) -> Result<ScaledComplex> {
    Ok(half_integer_k_big(n, &BigComplex::from_complex(x, ctx), ctx)?.to_scaled())
}

pub fn exact_half_integer_i(n: u64, x: Complex64, ctx: &BigCtx) -> Result<ScaledComplex> {
    Ok(half_integer_i_big(n, &BigComplex::from_complex(x, ctx), ctx)?.to_scaled())
}

/// Exact half-integer value of the requested kind at ν = n + 1/2.
pub fn exact_half_integer(kind: BesselKind, n: u64, x: Complex64, ctx: &BigCtx) -> Result<ScaledComplex> {
    let xb = BigComplex::from_complex(x, ctx);
    let v = match kind {
        BesselKind::K => half_integer_k_big(n, &xb, ctx)?,
        BesselKind::I => half_integer_i_big(n, &xb, ctx)?,
        BesselKind::Kprime => half_integer_kprime_big(n, &xb, ctx)?,
        BesselKind::Iprime => half_integer_iprime_big(n, &xb, ctx)?,
    };
    Ok(v.to_scaled())
}
