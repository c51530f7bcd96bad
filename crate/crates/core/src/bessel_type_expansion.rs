//! Expansion of Y_n^μ(ζ), ζ = 1/(νz), in K_ν(νz) and K′_ν(νz):
//!
//! ```text
//! Y_n^μ(ζ) ~ (2νz)^μ n! e^{νz}/Γ(n+μ+1) √(2νz/π) (K_ν(νz) Σ C_k/ν^k + K′_ν(νz) Σ D_k/ν^k)
//! ```
//!
//! The coefficients come from repeated integration by parts: with f_0 = s^μ,
//! `f_k = A_k + B_k s + φ′(s) g_k` and `f_{k+1} = g_k′ − (2s+1)/(2s(s+1)) g_k`,
//! then C_k = A_k + (1−z)/(2z) B_k and D_k = −B_k/2.
//!
//! f_k is carried as truncated Taylor series in [`IBP_DIGITS`]-digit
//! arithmetic. When the saddles s± are well apart there is one series at each
//! saddle and A_k, B_k interpolate the two values. When they are close, a
//! single series about the midpoint c = (1−z)/(2z) is divided by
//! (s−c)² − d², d² = (1+z²)/(4z²); at coincidence (d = 0) this is
//! value-and-derivative interpolation.

use num_complex::Complex64;

use crate::bessel_uniform::{eval_bessel_uniform, BesselKind};
use crate::elementary_expansion::{geometry_unchecked, refine_saddle};
use crate::error::{Error, Result};
use crate::exact_core::{exact_at_zeta, exact_sum_big, EvalReport, Method, PolyParams};
use crate::scaled_arith::{factorial_over_gamma, BigComplex, BigCtx, ScaledComplex};
use crate::series::{BigSeries, TruncatedSeries};

/// Relative saddle separation below which the nodes are treated as coincident.
pub const CONFLUENT_TAU: f64 = 1e-6;
/// Half-separation, relative to the distance of the midpoint from 0 and −1,
/// below which the midpoint scheme is used.
pub const MIDPOINT_RATIO: f64 = 0.3;
pub const DEFAULT_K: usize = 4;
/// Working precision of the coefficient recursion.
pub const IBP_DIGITS: u32 = 40;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Default series length for truncation order K.
pub fn default_len(k_max: usize) -> usize {
    2 * k_max + 8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// One series at each saddle.
    TwoPoint,
    /// One series at the midpoint, saddles distinct.
    Midpoint,
    /// Coincident saddles.
    Confluent,
}

/// The f_k representation at one step.
#[derive(Clone, Debug)]
pub enum FkSeries {
    Pair { plus: BigSeries, minus: BigSeries },
    Single(BigSeries),
}

#[derive(Clone, Debug)]
pub struct IbpState {
    pub z: BigComplex,
    pub mu: f64,
    pub s_plus: BigComplex,
    pub s_minus: BigComplex,
    /// Midpoint and squared half-separation of the saddles.
    pub mid: BigComplex,
    pub d2: BigComplex,
    pub scheme: Scheme,
    pub fk: FkSeries,
    pub k: usize,
    pub a: Vec<BigComplex>,
    pub b: Vec<BigComplex>,
}

impl IbpState {
    pub fn confluent(&self) -> bool {
        self.scheme == Scheme::Confluent
    }

    /// Max relative residual of f_k(s±) − (A_k + B_k s±) for the current
    /// step (value and derivative at the double node when confluent).
    pub fn interpolation_residual(&self, ctx: &BigCtx) -> f64 {
        let (a, b) = (&self.a[self.k], &self.b[self.k]);
        let rel = |x: &BigComplex, y: &BigComplex| {
            let d = x.sub(y, ctx).to_complex().norm();
            d / x.to_complex().norm().max(y.to_complex().norm()).max(1e-300)
        };
        let lin = |s: &BigComplex| a.add(&b.mul(s, ctx), ctx);
        match &self.fk {
            FkSeries::Pair { plus, minus } => {
                rel(&plus.coeff(0, ctx), &lin(&self.s_plus)).max(rel(&minus.coeff(0, ctx), &lin(&self.s_minus)))
            }
            FkSeries::Single(f) => {
                if self.confluent() {
                    rel(&f.coeff(0, ctx), &lin(&self.mid)).max(rel(&f.coeff(1, ctx), b))
                } else {
                    let dp = self.s_plus.sub(&self.mid, ctx);
                    let dm = self.s_minus.sub(&self.mid, ctx);
                    rel(&f.eval_offset(&dp, ctx), &lin(&self.s_plus))
                        .max(rel(&f.eval_offset(&dm, ctx), &lin(&self.s_minus)))
                }
            }
        }
    }
}

/// C_k, D_k for k = 0..=K.
#[derive(Clone, Debug, PartialEq)]
pub struct BesselTypeCoeffs {
    pub z: Complex64,
    pub mu: f64,
    pub c: Vec<Complex64>,
    pub d: Vec<Complex64>,
    pub scheme: Scheme,
    /// Largest interpolation residual met during the recursion.
    pub max_residual: f64,
}

impl BesselTypeCoeffs {
    /// (Σ C_k/ν^k, Σ D_k/ν^k) over k = 0..=K.
    pub fn sums(&self, nu: f64, k_max: usize) -> (Complex64, Complex64) {
        let sum = |v: &[Complex64]| v.iter().take(k_max + 1).rev().fold(c(0.0), |acc, x| acc / nu + x);
        (sum(&self.c), sum(&self.d))
    }
}

/// s^μ at a node; on the negative real axis the two boundary values of the
/// principal branch are averaged.
fn node_power(s: &BigComplex, mu: f64, ctx: &BigCtx) -> BigComplex {
    if mu.fract() == 0.0 && mu.abs() < 1e9 {
        s.powi(mu as i64, ctx)
    } else if s.is_real() && s.re.is_negative() {
        let mag = BigComplex::from_real(s.re.abs(), ctx).powf(mu, ctx);
        let turn = BigComplex { re: ctx.real(0.0), im: ctx.mul(&ctx.pi(), &ctx.real(mu)) }.exp(ctx);
        mag.mul_real(&turn.re, ctx)
    } else {
        s.powf(mu, ctx)
    }
}

fn poly(center: &BigComplex, coeffs: Vec<BigComplex>, len: usize, ctx: &BigCtx) -> BigSeries {
    let mut v = coeffs;
    v.resize(len, BigComplex::zero(ctx));
    v.truncate(len);
    BigSeries::new(center.clone(), v)
}

/// s(1+s)/(2z) about `p`.
fn weight(p: &BigComplex, z: &BigComplex, len: usize, ctx: &BigCtx) -> BigSeries {
    let one = BigComplex::one(ctx);
    let inv = z.mul_f64(2.0, ctx).recip(ctx);
    let c0 = p.mul(&p.add(&one, ctx), ctx).mul(&inv, ctx);
    let c1 = p.mul_f64(2.0, ctx).add(&one, ctx).mul(&inv, ctx);
    poly(p, vec![c0, c1, inv], len, ctx)
}

/// (2s+1)/(2s(s+1)) about `p`.
fn log_weight(p: &BigComplex, len: usize, ctx: &BigCtx) -> Result<BigSeries> {
    let one = BigComplex::one(ctx);
    let two_p1 = p.mul_f64(2.0, ctx).add(&one, ctx);
    let num = poly(p, vec![two_p1.clone(), BigComplex::from_f64(2.0, ctx)], len, ctx);
    let den = poly(
        p,
        vec![p.mul(&p.add(&one, ctx), ctx).mul_f64(2.0, ctx), two_p1.mul_f64(2.0, ctx), BigComplex::from_f64(2.0, ctx)],
        len,
        ctx,
    );
    num.div(&den, ctx)
}

fn next_f(g: &BigSeries, ctx: &BigCtx) -> Result<BigSeries> {
    let lw = log_weight(&g.center, g.len(), ctx)?;
    Ok(g.derivative(ctx).sub(&lw.mul(g, ctx), ctx))
}

fn choose_scheme(sp: Complex64, sm: Complex64) -> Scheme {
    let sep = (sp - sm).norm();
    if sep < CONFLUENT_TAU * (1.0 + sp.norm()) {
        return Scheme::Confluent;
    }
    let mid = 0.5 * (sp + sm);
    let room = mid.norm().min((1.0 + mid).norm());
    if 0.5 * sep <= MIDPOINT_RATIO * room {
        Scheme::Midpoint
    } else {
        Scheme::TwoPoint
    }
}

/// Value-and-derivative interpolation at a double node:
/// A = f(s_0) − s_0 f′(s_0), B = f′(s_0).
pub fn confluent_interp(f: &TruncatedSeries, s0: Complex64) -> (Complex64, Complex64) {
    let fv = f.eval(s0);
    let dv = f.derivative().eval(s0);
    (fv - s0 * dv, dv)
}

/// Initial state with f_0 = s^μ and series of length `len`.
pub fn ibp_init(z: Complex64, mu: f64, len: usize, ctx: &BigCtx) -> Result<IbpState> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let g = geometry_unchecked(z);
    let scheme = choose_scheme(g.s_plus, g.s_minus);
    let zb = BigComplex::from_complex(z, ctx);
    let one = BigComplex::one(ctx);
    let two_z = zb.mul_f64(2.0, ctx);
    let mid = one.sub(&zb, ctx).div(&two_z, ctx);
    let d2 = one.add(&zb.mul(&zb, ctx), ctx).div(&two_z.mul(&two_z, ctx), ctx);
    let (sp, sm) = (refine_saddle(g.s_plus, &zb, ctx), refine_saddle(g.s_minus, &zb, ctx));
    let fk = match scheme {
        Scheme::TwoPoint => FkSeries::Pair {
            plus: BigSeries::power(&sp, node_power(&sp, mu, ctx), mu, len, ctx),
            minus: BigSeries::power(&sm, node_power(&sm, mu, ctx), mu, len, ctx),
        },
        Scheme::Midpoint | Scheme::Confluent => {
            FkSeries::Single(BigSeries::power(&mid, node_power(&mid, mu, ctx), mu, len, ctx))
        }
    };
    let d2 = if scheme == Scheme::Confluent { BigComplex::zero(ctx) } else { d2 };
    Ok(IbpState { z: zb, mu, s_plus: sp, s_minus: sm, mid, d2, scheme, fk, k: 0, a: Vec::new(), b: Vec::new() })
}

/// F(σ) = α + βσ + (σ² − d²) Q(σ) for the truncated series F, by exact
/// top-down division.
fn divide_quadratic(f: &BigSeries, d2: &BigComplex, ctx: &BigCtx) -> (BigComplex, BigComplex, BigSeries) {
    let n = f.len().saturating_sub(2);
    let mut q = vec![BigComplex::zero(ctx); n];
    for j in (0..n).rev() {
        let above = if j + 2 < n { d2.mul(&q[j + 2], ctx) } else { BigComplex::zero(ctx) };
        q[j] = f.coeff(j + 2, ctx).add(&above, ctx);
    }
    let qa = q.first().map(|x| d2.mul(x, ctx)).unwrap_or_else(|| BigComplex::zero(ctx));
    let qb = q.get(1).map(|x| d2.mul(x, ctx)).unwrap_or_else(|| BigComplex::zero(ctx));
    (f.coeff(0, ctx).add(&qa, ctx), f.coeff(1, ctx).add(&qb, ctx), BigSeries::new(f.center.clone(), q))
}

/// Compute A_k, B_k for the current f_k.
pub fn ibp_interpolate(state: &mut IbpState, ctx: &BigCtx) {
    let (a, b) = match &state.fk {
        FkSeries::Pair { plus, minus } => {
            let (sp, sm) = (&state.s_plus, &state.s_minus);
            let (fp, fm) = (plus.coeff(0, ctx), minus.coeff(0, ctx));
            let sep = sp.sub(sm, ctx);
            let a = sp.mul(&fm, ctx).sub(&sm.mul(&fp, ctx), ctx).div(&sep, ctx);
            (a, fp.sub(&fm, ctx).div(&sep, ctx))
        }
        FkSeries::Single(f) => {
            let (alpha, beta, _) = divide_quadratic(f, &state.d2, ctx);
            (alpha.sub(&beta.mul(&state.mid, ctx), ctx), beta)
        }
    };
    state.a.push(a);
    state.b.push(b);
}

/// Advance f_k to f_{k+1} using the A_k, B_k already computed.
pub fn ibp_step(state: &mut IbpState, ctx: &BigCtx) -> Result<()> {
    let (a, b) = (&state.a[state.k], &state.b[state.k]);
    let z = &state.z;
    let fk = match &state.fk {
        FkSeries::Pair { plus, minus } => {
            let g_at = |f: &BigSeries, own: &BigComplex, other: &BigComplex| -> Result<BigSeries> {
                let lin = poly(own, vec![a.add(&b.mul(own, ctx), ctx), b.clone()], f.len(), ctx);
                // the numerator vanishes at its own node
                let num = f.sub(&lin, ctx).shift_down();
                let den = poly(own, vec![own.sub(other, ctx), BigComplex::one(ctx)], num.len(), ctx);
                let h = num.div(&den, ctx)?;
                Ok(h.mul(&weight(own, z, h.len(), ctx), ctx))
            };
            let gp = g_at(plus, &state.s_plus, &state.s_minus)?;
            let gm = g_at(minus, &state.s_minus, &state.s_plus)?;
            FkSeries::Pair { plus: next_f(&gp, ctx)?, minus: next_f(&gm, ctx)? }
        }
        FkSeries::Single(f) => {
            let (_, _, q) = divide_quadratic(f, &state.d2, ctx);
            let g = q.mul(&weight(&f.center, z, q.len(), ctx), ctx);
            FkSeries::Single(next_f(&g, ctx)?)
        }
    };
    let len = match &fk {
        FkSeries::Pair { plus, minus } => plus.len().min(minus.len()),
        FkSeries::Single(s) => s.len(),
    };
    if len < 2 {
        return Err(Error::SeriesExhausted { required: 0 });
    }
    state.fk = fk;
    state.k += 1;
    Ok(())
}

/// Series length consumed by K steps, by scheme.
fn required_len(scheme: Scheme, k_max: usize) -> usize {
    match scheme {
        Scheme::TwoPoint => 2 * k_max + 2,
        Scheme::Midpoint | Scheme::Confluent => 3 * k_max + 2,
    }
}

/// C_k, D_k for k = 0..=K from series of length L.
pub fn ibp_coeffs(z: Complex64, mu: f64, k_max: usize, len: usize) -> Result<BesselTypeCoeffs> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    if len < 2 * k_max + 6 {
        return Err(Error::SeriesExhausted { required: 2 * k_max + 6 });
    }
    let g = geometry_unchecked(z);
    let scheme = choose_scheme(g.s_plus, g.s_minus);
    // the midpoint scheme spends a further coefficient per step and relies
    // on the tail of the series, so it gets a longer working length
    let work = match scheme {
        Scheme::TwoPoint => len,
        _ => len.max(3 * k_max + 40),
    };
    let ctx = BigCtx::new(IBP_DIGITS);
    let mut st = ibp_init(z, mu, work, &ctx)?;
    let mut max_residual: f64 = 0.0;
    for k in 0..=k_max {
        ibp_interpolate(&mut st, &ctx);
        max_residual = max_residual.max(st.interpolation_residual(&ctx));
        if k < k_max {
            ibp_step(&mut st, &ctx).map_err(|_| Error::SeriesExhausted { required: required_len(scheme, k_max) })?;
        }
    }
    let half = st.mid.clone();
    let cc = st.a.iter().zip(&st.b).map(|(a, b)| a.add(&half.mul(b, &ctx), &ctx).to_complex()).collect();
    let dd = st.b.iter().map(|b| b.mul_f64(-0.5, &ctx).to_complex()).collect();
    Ok(BesselTypeCoeffs { z, mu, c: cc, d: dd, scheme, max_residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselSource {
    /// Half-integer K from the finite sums of Y_n^0.
    ExactHalfInteger,
    /// The uniform large-ν expansions (sector-restricted).
    UniformExpansion,
}

/// Y_n^μ(ζ), ζ = 1/(νz), from K_ν(νz), K′_ν(νz) and K+1 coefficient pairs.
pub fn eval_thm4(params: &PolyParams, k_max: usize, source: BesselSource, ctx: &BigCtx) -> Result<EvalReport> {
    let (n, mu, z) = (params.n, params.mu, params.z);
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    if n < 5 {
        return Err(Error::InvalidArgument(format!("n = {n} below the minimum 5")));
    }
    params.check_gamma_domain()?;
    let nu = params.nu();
    let coeffs = ibp_coeffs(z, mu, k_max + 1, default_len(k_max + 1))?;
    // √(2νz/π) e^{νz} K_ν(νz) and √(2νz/π) e^{νz} K′_ν(νz)
    let (kv, kp) = match source {
        BesselSource::ExactHalfInteger => {
            let y0 = exact_at_zeta(n, 0.0, z, false, ctx)?.value.to_scaled();
            let y1 = y_next_at_zeta(n, z, ctx)?;
            (y0, y0.mul_complex(1.0 / z) - y1)
        }
        BesselSource::UniformExpansion => {
            let k = eval_bessel_uniform(BesselKind::K, nu, z, k_max + 1)?.value;
            let kd = eval_bessel_uniform(BesselKind::Kprime, nu, z, k_max + 1)?.value;
            let pre = ScaledComplex::exp(0.5 * (2.0 * nu * z / std::f64::consts::PI).ln() + nu * z);
            (k * pre, kd * pre)
        }
    };
    let (sc, sd) = coeffs.sums(nu, k_max);
    let body = kv.mul_complex(sc) + kp.mul_complex(sd);
    let next =
        (kv.mul_complex(coeffs.c[k_max + 1]) + kp.mul_complex(coeffs.d[k_max + 1])).scale(nu.powi(-(k_max as i32) - 1));
    let err = (next.abs() / body.abs()).to_complex().re;
    let ratio = factorial_over_gamma(n, mu, ctx)?.to_scaled();
    let front = ScaledComplex::from_complex(2.0 * nu * z).powf(mu) * ratio;
    let mut rep = EvalReport::new(front * body, Method::BesselType, k_max + 1, Some(err));
    match coeffs.scheme {
        Scheme::Confluent => rep = rep.with_note("coincident saddles"),
        Scheme::Midpoint => rep = rep.with_note("near-coincident saddles"),
        Scheme::TwoPoint => {}
    }
    Ok(rep)
}

/// Y_{n+1}^0 at ζ = 1/(νz) with ν = n + 1/2.
fn y_next_at_zeta(n: u64, z: Complex64, ctx: &BigCtx) -> Result<ScaledComplex> {
    let nu = BigComplex::from_f64(n as f64 + 0.5, ctx);
    let zeta = BigComplex::from_complex(z, ctx).mul(&nu, ctx).recip(ctx);
    Ok(exact_sum_big(n + 1, 0.0, &zeta, ctx)?.value.to_scaled())
}

/// For μ = −1 the coefficient series are geometric and sum to
/// Y_n^{−1}(ζ) = ((z−2) Y_n^0(ζ) + z Y_{n+1}^0(ζ)) / (2z).
pub fn mu_minus_one_closed(n: u64, z: Complex64, ctx: &BigCtx) -> Result<ScaledComplex> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let y0 = exact_at_zeta(n, 0.0, z, false, ctx)?.value.to_scaled();
    let y1 = y_next_at_zeta(n, z, ctx)?;
    Ok((y0.mul_complex(z - 2.0) + y1.mul_complex(z)).mul_complex(1.0 / (2.0 * z)))
}
