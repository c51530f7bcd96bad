//! Ground-truth evaluation of Y_n^μ(z).
//!
//! Everything here runs under a [`BigCtx`]: the explicit finite sum, the
//! forward three-term recurrence in `n`, residual checks of the contiguous
//! relations, and the F/U split of Y_n^μ(−1/z) used for Re z > 0.

use std::fmt;

use astro_float::BigFloat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scaled_arith::big::big_to_f64;
use crate::scaled_arith::{gamma_shifted, BigComplex, BigCtx, ScaledComplex};

/// Reported error estimates above this ask for more digits.
pub const RAISE_PRECISION_THRESHOLD: f64 = 1e-20;

/// Degree, order and argument. Each operation documents whether `z` is the
/// polynomial argument itself or the scaled variable with ζ = 1/(νz).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyParams {
    pub n: u64,
    pub mu: f64,
    pub z: Complex64,
}

impl PolyParams {
    pub fn new(n: u64, mu: f64, z: Complex64) -> Self {
        PolyParams { n, mu, z }
    }

    pub fn real(n: u64, mu: f64, z: f64) -> Self {
        PolyParams { n, mu, z: Complex64::new(z, 0.0) }
    }

    /// ν = n + 1/2.
    pub fn nu(&self) -> f64 {
        self.n as f64 + 0.5
    }

    /// ζ = 1/(νz).
    pub fn zeta(&self) -> Complex64 {
        1.0 / (self.nu() * self.z)
    }

    pub(crate) fn check_gamma_domain(&self) -> Result<()> {
        let a = self.n as f64 + self.mu + 1.0;
        if a > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("n + mu + 1 = {a} must be positive")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactSum,
    RecurrenceN,
    RecurrenceMu,
    Simple,
    ElementaryPos,
    ElementaryNegF,
    ElementaryNegU,
    BesselType,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::ExactSum,
        Method::RecurrenceN,
        Method::RecurrenceMu,
        Method::Simple,
        Method::ElementaryPos,
        Method::ElementaryNegF,
        Method::ElementaryNegU,
        Method::BesselType,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::ExactSum => "exact_sum",
            Method::RecurrenceN => "recurrence_n",
            Method::RecurrenceMu => "recurrence_mu",
            Method::Simple => "simple",
            Method::ElementaryPos => "elementary_pos",
            Method::ElementaryNegF => "elementary_neg_F",
            Method::ElementaryNegU => "elementary_neg_U",
            Method::BesselType => "bessel_type",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result record shared by all evaluators.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub value: ScaledComplex,
    pub method: Method,
    pub terms_used: usize,
    /// Estimated relative error; `None` when no estimate is available.
    pub err_estimate: Option<f64>,
    pub notes: String,
}

impl EvalReport {
    pub fn new(value: ScaledComplex, method: Method, terms_used: usize, err_estimate: Option<f64>) -> Self {
        EvalReport { value, method, terms_used: terms_used.max(1), err_estimate, notes: String::new() }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(&note);
        self
    }
}

/// Rising factorial (p)_k.
pub fn pochhammer(p: &BigComplex, k: u64, ctx: &BigCtx) -> BigComplex {
    let mut acc = BigComplex::one(ctx);
    let mut factor = p.clone();
    let one = BigComplex::one(ctx);
    for _ in 0..k {
        acc = acc.mul(&factor, ctx);
        factor = factor.add(&one, ctx);
    }
    acc
}

/// A big-precision value with the cancellation-aware relative error of the
/// sum that produced it.
#[derive(Clone, Debug)]
pub struct ExactValue {
    pub value: BigComplex,
    pub err_estimate: f64,
}

/// Σ_k C(n,k)(n+μ+1)_k (z/2)^k at big precision, accumulated left to right.
pub fn exact_sum_big(n: u64, mu: f64, z: &BigComplex, ctx: &BigCtx) -> Result<ExactValue> {
    PolyParams::new(n, mu, Complex64::new(0.0, 0.0)).check_gamma_domain()?;
    exact_sum_shifted(n, mu, 0, z, ctx)
}

/// `μ + k` formed at big precision, so that shifted orders stay exact.
pub(crate) fn mu_plus(mu: f64, k: f64, ctx: &BigCtx) -> BigFloat {
    ctx.add(&ctx.real(mu), &ctx.real(k))
}

/// The explicit sum for Y_n^{μ+shift}, with the shift applied at big precision.
pub fn exact_sum_shifted(n: u64, mu: f64, shift: i64, z: &BigComplex, ctx: &BigCtx) -> Result<ExactValue> {
    let order = n as f64 + mu + shift as f64 + 1.0;
    if order.is_nan() || order <= 0.0 {
        return Err(Error::Domain(format!("n + mu + 1 = {order} must be positive")));
    }
    if z.is_zero() {
        return Ok(ExactValue { value: BigComplex::one(ctx), err_estimate: ctx.unit() * 100.0 });
    }
    let half_z = z.mul_f64(0.5, ctx);
    let a = mu_plus(mu, (n as i64 + shift + 1) as f64, ctx);
    let mut term = BigComplex::one(ctx);
    let mut sum = BigComplex::one(ctx);
    let mut abs_sum = ctx.int(1);
    for k in 0..n {
        // t_{k+1} = t_k (n-k)/(k+1) (n+μ+1+k) z/2
        let ratio =
            ctx.div(&ctx.mul(&ctx.int((n - k) as i64), &ctx.add(&a, &ctx.int(k as i64))), &ctx.int(k as i64 + 1));
        term = term.mul(&half_z, ctx).mul_real(&ratio, ctx);
        sum = sum.add(&term, ctx);
        abs_sum = ctx.add(&abs_sum, &term.abs(ctx));
    }
    let err_estimate = cancellation_error(&abs_sum, &sum, ctx);
    Ok(ExactValue { value: sum, err_estimate })
}

/// `10^(2-P) Σ|t| / |Σ t|`.
pub(crate) fn cancellation_error(abs_sum: &BigFloat, sum: &BigComplex, ctx: &BigCtx) -> f64 {
    let s = sum.abs(ctx);
    if s.is_zero() {
        return f64::INFINITY;
    }
    100.0 * ctx.unit() * big_to_f64(&ctx.div(abs_sum, &s))
}

/// Explicit finite sum with `z` the polynomial argument.
pub fn eval_exact_sum(params: &PolyParams, ctx: &BigCtx) -> Result<EvalReport> {
    params.check_gamma_domain()?;
    let z = BigComplex::from_complex(params.z, ctx);
    let ex = exact_sum_big(params.n, params.mu, &z, ctx)?;
    let mut rep = EvalReport::new(ex.value.to_scaled(), Method::ExactSum, params.n as usize + 1, Some(ex.err_estimate));
    if params.z.norm() == 0.0 {
        rep = rep.with_note("z = 0");
    }
    if ex.err_estimate > RAISE_PRECISION_THRESHOLD {
        rep = rep.with_note("raise precision");
    }
    Ok(rep)
}

/// Exact sum at doubling precision until the cancellation estimate drops
/// below `target` (at most `max_digits` digits).
pub fn exact_sum_adaptive(
    n: u64,
    mu: f64,
    z: Complex64,
    target: f64,
    start: &BigCtx,
    max_digits: u32,
) -> Result<(ExactValue, u32)> {
    let mut digits = start.digits();
    loop {
        let ctx = BigCtx::new(digits);
        let zb = BigComplex::from_complex(z, &ctx);
        let ex = exact_sum_big(n, mu, &zb, &ctx)?;
        if ex.err_estimate <= target || digits * 2 > max_digits {
            return Ok((ex, digits));
        }
        digits *= 2;
    }
}

/// Y_n^μ at the scaled argument ζ = 1/(νz) (or −ζ when `negate`), with ζ formed
/// at big precision from `z`.
pub fn exact_at_zeta(n: u64, mu: f64, z: Complex64, negate: bool, ctx: &BigCtx) -> Result<ExactValue> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let nu = ctx.real(n as f64 + 0.5);
    let mut zeta = BigComplex::from_complex(z, ctx).mul_real(&nu, ctx).recip(ctx);
    if negate {
        zeta = zeta.neg();
    }
    exact_sum_big(n, mu, &zeta, ctx)
}

/// Forward recurrence in `n` started from Y_0 and Y_1; `z` is the polynomial
/// argument.
pub fn eval_recurrence_n(params: &PolyParams, ctx: &BigCtx) -> Result<EvalReport> {
    params.check_gamma_domain()?;
    let z = BigComplex::from_complex(params.z, ctx);
    let y = recurrence_n_big(params.n, params.mu, &z, ctx)?;
    Ok(EvalReport::new(y.to_scaled(), Method::RecurrenceN, params.n as usize + 1, None)
        .with_note("forward recurrence; cross-check against exact_sum"))
}

pub fn recurrence_n_big(n: u64, mu: f64, z: &BigComplex, ctx: &BigCtx) -> Result<BigComplex> {
    let mut y0 = BigComplex::one(ctx);
    if n == 0 {
        return Ok(y0);
    }
    let mut y1 = BigComplex::one(ctx).add(&z.mul_real(&mu_plus(mu, 2.0, ctx), ctx).mul_f64(0.5, ctx), ctx);
    let p = |k: f64| mu_plus(mu, k, ctx);
    let two_mu = BigComplex::from_real(ctx.mul(&ctx.real(mu), &ctx.int(2)), ctx);
    for m in 0..n.saturating_sub(1) {
        let m = m as f64;
        let a = ctx.mul(&ctx.mul(&p(2.0 * m + 2.0), &p(m + 2.0)), &ctx.int(2));
        if a.is_zero() {
            return Err(Error::DivisionByZero("recurrence coefficient A_n"));
        }
        // B = (2m+μ+3)(2μ + z(2m+μ+4)(2m+μ+2))
        let b_inner = z.mul_real(&ctx.mul(&p(2.0 * m + 4.0), &p(2.0 * m + 2.0)), ctx).add(&two_mu, ctx);
        let b = b_inner.mul_real(&p(2.0 * m + 3.0), ctx);
        let c = ctx.mul(&ctx.real(2.0 * (m + 1.0)), &p(2.0 * m + 4.0));
        let y2 = b.mul(&y1, ctx).add(&y0.mul_real(&c, ctx), ctx).div_real(&a, ctx);
        y0 = y1;
        y1 = y2;
    }
    Ok(y1)
}

/// Relative residual of the contiguous relation in μ,
/// `(n+μ+2)Y^{μ+2} = (2n+μ+2−2/z)Y^{μ+1} + (2/z)Y^μ`.
pub fn recurrence_mu_check(params: &PolyParams, ctx: &BigCtx) -> Result<f64> {
    if params.z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    params.check_gamma_domain()?;
    let (n, mu) = (params.n, params.mu);
    let z = BigComplex::from_complex(params.z, ctx);
    let y0 = exact_sum_shifted(n, mu, 0, &z, ctx)?.value;
    let y1 = exact_sum_shifted(n, mu, 1, &z, ctx)?.value;
    let y2 = exact_sum_shifted(n, mu, 2, &z, ctx)?.value;
    let two_over_z = BigComplex::from_f64(2.0, ctx).div(&z, ctx);
    let coef = BigComplex::from_real(mu_plus(mu, 2.0 * n as f64 + 2.0, ctx), ctx).sub(&two_over_z, ctx);
    let lhs = y2.mul_real(&mu_plus(mu, n as f64 + 2.0, ctx), ctx);
    let rhs = coef.mul(&y1, ctx).add(&two_over_z.mul(&y0, ctx), ctx);
    Ok(big_to_f64(&ctx.div(&lhs.sub(&rhs, ctx).abs(ctx), &y0.abs(ctx))))
}

/// Residuals of the two derivative identities, each relative to the
/// term-by-term derivative:
/// `(vs ½n(n+μ+1)Y_{n−1}^{μ+2}, vs (n+μ+1)(Y^{μ+1}−Y^μ)/z)`.
/// The second is `None` at `z = 0`.
pub fn derivative_check(params: &PolyParams, ctx: &BigCtx) -> Result<(f64, Option<f64>)> {
    let (n, mu) = (params.n, params.mu);
    if n == 0 {
        return Err(Error::InvalidArgument("derivative check needs n >= 1".into()));
    }
    params.check_gamma_domain()?;
    let z = BigComplex::from_complex(params.z, ctx);
    let d = derivative_big(n, mu, &z, ctx);
    let dn = d.abs(ctx);
    let a = mu_plus(mu, n as f64 + 1.0, ctx);
    let lower = exact_sum_shifted(n - 1, mu, 2, &z, ctx)?.value.mul_real(&a, ctx).mul_f64(0.5 * n as f64, ctx);
    let r1 = big_to_f64(&ctx.div(&d.sub(&lower, ctx).abs(ctx), &dn));
    let r2 = if params.z.norm() == 0.0 {
        None
    } else {
        let y0 = exact_sum_shifted(n, mu, 0, &z, ctx)?.value;
        let y1 = exact_sum_shifted(n, mu, 1, &z, ctx)?.value;
        let shifted = y1.sub(&y0, ctx).div(&z, ctx).mul_real(&a, ctx);
        Some(big_to_f64(&ctx.div(&d.sub(&shifted, ctx).abs(ctx), &dn)))
    };
    Ok((r1, r2))
}

/// d/dz of the explicit sum, differentiated term by term.
pub fn derivative_big(n: u64, mu: f64, z: &BigComplex, ctx: &BigCtx) -> BigComplex {
    let half_z = z.mul_f64(0.5, ctx);
    // c_k (z/2)^{k-1} with c_k = C(n,k)(n+μ+1)_k; derivative term k c_k (z/2)^{k-1}/2
    let mut coef = ctx.int(1);
    let mut power = BigComplex::one(ctx);
    let mut acc = BigComplex::zero(ctx);
    for k in 1..=n {
        let a = mu_plus(mu, (n + k) as f64, ctx);
        coef = ctx.mul(&coef, &ctx.div(&ctx.mul(&ctx.int((n - k + 1) as i64), &a), &ctx.int(k as i64)));
        let term = power.mul_real(&ctx.mul(&coef, &ctx.real(k as f64 * 0.5)), ctx);
        acc = acc.add(&term, ctx);
        power = power.mul(&half_z, ctx);
    }
    acc
}

/// The decomposition Y_n^μ(−1/z) = F + U for Re z > 0.
#[derive(Clone, Debug)]
pub struct KummerSplit {
    pub f: BigComplex,
    pub u: BigComplex,
    pub y: BigComplex,
    /// Estimated relative error of U (the subtractive part).
    pub u_err: f64,
    pub f_terms: usize,
    /// Digits finally used.
    pub digits: u32,
}

impl KummerSplit {
    pub fn f_scaled(&self) -> ScaledComplex {
        self.f.to_scaled()
    }

    pub fn u_scaled(&self) -> ScaledComplex {
        self.u.to_scaled()
    }
}

/// n!(2z)^{n+μ+1}/Γ(2n+μ+2) at big precision.
fn split_prefactor(n: u64, mu: f64, z: &BigComplex, ctx: &BigCtx) -> Result<BigComplex> {
    let two_z = z.mul_f64(2.0, ctx);
    let mut fact = ctx.int(1);
    for k in 2..=n {
        fact = ctx.mul(&fact, &ctx.int(k as i64));
    }
    let g = gamma_shifted(mu, 2.0 * n as f64 + 2.0, ctx)?;
    let pow = two_z.powi(n as i64 + 1, ctx).mul(&two_z.powf(mu, ctx), ctx);
    Ok(pow.mul_real(&ctx.div(&fact, &g.re), ctx))
}

/// ₁F₁(a; c; x) summed until the tail is below `10^-P` relative and at
/// least `min_terms` terms are used. Returns (sum, Σ|t|, terms).
fn hyp1f1_big(
    a: &BigFloat,
    c: &BigFloat,
    x: &BigComplex,
    min_terms: usize,
    ctx: &BigCtx,
) -> Result<(BigComplex, BigFloat, usize)> {
    const CAP: usize = 1_000_000;
    let mut term = BigComplex::one(ctx);
    let mut sum = BigComplex::one(ctx);
    let mut abs_sum = ctx.int(1);
    let tol = ctx.unit();
    for k in 0..CAP {
        let kf = k as f64;
        let kb = ctx.int(k as i64);
        let ratio = ctx.div(&ctx.add(a, &kb), &ctx.mul(&ctx.add(c, &kb), &ctx.real(kf + 1.0)));
        term = term.mul(x, ctx).mul_real(&ratio, ctx);
        sum = sum.add(&term, ctx);
        let ta = term.abs(ctx);
        abs_sum = ctx.add(&abs_sum, &ta);
        if k + 1 >= min_terms {
            let rel = big_to_f64(&ctx.div(&ta, &sum.abs(ctx)));
            if rel < tol && kf + 1.0 > x.abs(ctx).to_f64_lossy() {
                return Ok((sum, abs_sum, k + 2));
            }
        }
    }
    Err(Error::NonConvergence(CAP))
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for BigFloat {
    fn to_f64_lossy(&self) -> f64 {
        big_to_f64(self)
    }
}

/// F from its convergent ₁F₁ series at the given precision.
fn split_f(n: u64, mu: f64, z: &BigComplex, ctx: &BigCtx) -> Result<(BigComplex, f64, usize)> {
    let two_z = z.mul_f64(2.0, ctx);
    let min_terms = 2 * n as usize + (4.0 * z.abs(ctx).to_f64_lossy()).ceil() as usize;
    let (a, c) = (ctx.int(n as i64 + 1), mu_plus(mu, 2.0 * n as f64 + 2.0, ctx));
    let (s, abs_s, terms) = hyp1f1_big(&a, &c, &two_z, min_terms, ctx)?;
    let pre = split_prefactor(n, mu, z, ctx)?;
    let f = pre.mul(&two_z.neg().exp(ctx), ctx).mul(&s, ctx);
    Ok((f, cancellation_error(&abs_s, &s, ctx), terms))
}

/// F = n!(2z)^{n+μ+1}/Γ(2n+μ+2)·₁F₁(n+μ+1; 2n+μ+2; −2z): the same function
/// after Kummer's transformation, used as an independent second route.
pub fn split_f_transformed(n: u64, mu: f64, z: Complex64, ctx: &BigCtx) -> Result<BigComplex> {
    if z.re <= 0.0 {
        return Err(Error::Domain(format!("F/U split needs Re z > 0, got {z}")));
    }
    // the alternating series loses about 2 Re z / ln 10 digits
    let extra = (2.0 * z.norm() / std::f64::consts::LN_10).ceil() as u32 + 10;
    let wide = BigCtx::new(ctx.digits() + extra);
    let zb = BigComplex::from_complex(z, &wide);
    let x = zb.mul_f64(-2.0, &wide);
    let min_terms = 2 * n as usize + (4.0 * z.norm()).ceil() as usize;
    let (a, c) = (mu_plus(mu, n as f64 + 1.0, &wide), mu_plus(mu, 2.0 * n as f64 + 2.0, &wide));
    let (s, _, _) = hyp1f1_big(&a, &c, &x, min_terms, &wide)?;
    let pre = split_prefactor(n, mu, &zb, &wide)?;
    let f = pre.mul(&s, &wide);
    Ok(BigComplex { re: f.re.clone(), im: f.im.clone() })
}

/// Y_n^μ(−1/z) = F_n^μ(1/z) + U_n^μ(1/z) for Re z > 0. F comes from its
/// convergent series; U is defined as the difference. The precision is
/// doubled until the estimated relative error of U is below `target`.
pub fn kummer_split(params: &PolyParams, target: f64, ctx: &BigCtx) -> Result<KummerSplit> {
    let (n, mu, z) = (params.n, params.mu, params.z);
    params.check_gamma_domain()?;
    if z.re.is_nan() || z.re <= 0.0 {
        return Err(Error::Domain(format!("F/U split needs Re z > 0, got {z}")));
    }
    let max_digits = ctx.digits().max(60) * 16;
    let mut digits = ctx.digits();
    loop {
        let c = BigCtx::new(digits);
        let zb = BigComplex::from_complex(z, &c);
        let arg = zb.recip(&c).neg();
        let y = exact_sum_big(n, mu, &arg, &c)?;
        let (f, f_err, f_terms) = split_f(n, mu, &zb, &c)?;
        let u = y.value.sub(&f, &c);
        let u_err = if u.is_zero() {
            f64::INFINITY
        } else {
            let ua = u.abs(&c);
            let ratio_y = big_to_f64(&c.div(&y.value.abs(&c), &ua));
            let ratio_f = big_to_f64(&c.div(&f.abs(&c), &ua));
            y.err_estimate * ratio_y + f_err.max(100.0 * c.unit()) * ratio_f
        };
        if u_err <= target || digits * 2 > max_digits {
            return Ok(KummerSplit { f, u, y: y.value, u_err, f_terms, digits });
        }
        digits *= 2;
    }
}
