//! Saddle-point expansions of Y_n^μ(ζ), ζ = 1/(νz), ν = n + 1/2, in
//! elementary functions of z.
//!
//! With φ(s) = 2zs − ln s − ln(1+s) and its saddle s₊, the substitution
//! φ(s) − φ(s₊) = ½φ″(s₊)w² is reverted numerically; the amplitude functions
//! are composed with s(w) and the even Taylor coefficients give F_k, G_k.
//! Dividing out the Γ* series gives
//!
//! ```text
//! Y_n^μ(ζ)  ~ (1−z+√(1+z²))^μ √z (1+z²)^{-1/4} e^{νz−νη} Σ A_k/ν^k
//! U_n^μ(ζ)  ~ (−1)^n (1+z+√(1+z²))^μ √z (1+z²)^{-1/4} e^{−νz−νη} Σ B_k/ν^k
//! F_n^μ(ζ)  ~ (1+z−√(1+z²))^μ √z (1+z²)^{-1/4} e^{−νz+νη} Σ C_k/ν^k
//! ```
//!
//! with Y_n^μ(−ζ) = F + U.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_core::{EvalReport, Method, PolyParams};
use crate::scaled_arith::{gamma_star_series, BigComplex, BigCtx, ScaledComplex};
use crate::series::{BigSeries, TruncatedSeries};

/// Default sector margin δ in |ph z| ≤ π/2 − δ.
pub const DEFAULT_DELTA: f64 = 0.05;
/// |1+z²| below this is refused.
pub const TURNING_POINT_RADIUS: f64 = 1e-8;
/// Default truncation order.
pub const DEFAULT_K: usize = 4;
/// Minimal reversion length.
pub const DEFAULT_L: usize = 16;
/// Working digits of the reversion and amplitude series.
pub const SERIES_DIGITS: u32 = 40;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleGeometry {
    pub z: Complex64,
    /// √(1+z²), principal branch.
    pub root: Complex64,
    pub t: Complex64,
    pub eta: Complex64,
    pub s_plus: Complex64,
    pub s_minus: Complex64,
    /// φ″(s₊).
    pub phi2: Complex64,
}

/// Saddles and derived quantities for |ph z| < π/2, away from z = ±i.
pub fn saddle_geometry(z: Complex64) -> Result<SaddleGeometry> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let phase = z.arg().abs();
    if phase >= FRAC_PI_2 {
        return Err(Error::SectorViolation { phase, limit: FRAC_PI_2 });
    }
    let one_z2 = 1.0 + z * z;
    if one_z2.norm() < TURNING_POINT_RADIUS {
        return Err(Error::TurningPoint { distance: one_z2.norm() });
    }
    Ok(geometry_unchecked(z))
}

pub(crate) fn geometry_unchecked(z: Complex64) -> SaddleGeometry {
    let root = (1.0 + z * z).sqrt();
    let t = 1.0 / root;
    let eta = root + (z / (1.0 + root)).ln();
    // 1 − z + √(1+z²) = 1 + 1/(z + √(1+z²))
    let s_plus = (1.0 + 1.0 / (z + root)) / (2.0 * z);
    // (1 − z − √(1+z²))/(2z) = −1/2 − z/(2(1+√(1+z²)))
    let s_minus = -0.5 - z / (2.0 * (1.0 + root));
    let phi2 = 4.0 * z * z * root / (1.0 + root);
    SaddleGeometry { z, root, t, eta, s_plus, s_minus, phi2 }
}

impl SaddleGeometry {
    /// ln of √z (1+z²)^{-1/4}.
    fn ln_common(&self) -> Complex64 {
        0.5 * self.z.ln() - 0.5 * self.root.ln()
    }
}

/// Checks |ph z| ≤ π/2 − δ and the turning-point guard, then builds the geometry.
pub fn sector_geometry(z: Complex64, delta: f64) -> Result<SaddleGeometry> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let limit = FRAC_PI_2 - delta;
    let phase = z.arg().abs();
    if phase > limit {
        return Err(Error::SectorViolation { phase, limit });
    }
    saddle_geometry(z)
}

/// Newton refinement of a root of 2zs² + (2z−2)s − 1.
pub(crate) fn refine_saddle(s: Complex64, z: &BigComplex, ctx: &BigCtx) -> BigComplex {
    let mut x = BigComplex::from_complex(s, ctx);
    let two_z = z.mul_f64(2.0, ctx);
    let lin = two_z.sub(&BigComplex::from_f64(2.0, ctx), ctx);
    for _ in 0..4 {
        let q = two_z.mul(&x, ctx).add(&lin, ctx).mul(&x, ctx).sub(&BigComplex::one(ctx), ctx);
        let dq = two_z.mul(&x, ctx).mul_f64(2.0, ctx).add(&lin, ctx);
        if dq.is_zero() {
            break;
        }
        x = x.sub(&q.div(&dq, ctx), ctx);
    }
    x
}

fn revert_big(geom: &SaddleGeometry, l: usize, ctx: &BigCtx) -> Result<BigSeries> {
    if l < 2 {
        return Err(Error::InvalidArgument(format!("reversion length L = {l} must be at least 2")));
    }
    let sp = refine_saddle(geom.s_plus, &BigComplex::from_complex(geom.z, ctx), ctx);
    let s1 = sp.add(&BigComplex::one(ctx), ctx);
    // φ(s₊+σ) − φ(s₊) = Σ_{j≥2} a_j σ^j
    let a = |j: usize| -> BigComplex {
        let sum = sp.powi(-(j as i64), ctx).add(&s1.powi(-(j as i64), ctx), ctx);
        let v = sum.div_real(&ctx.int(j as i64), ctx);
        if j.is_multiple_of(2) {
            v
        } else {
            v.neg()
        }
    };
    let a2 = a(2);
    if a2.is_zero() {
        return Err(Error::NonConvergence(0));
    }
    let zero = BigComplex::zero(ctx);
    let h = BigSeries::new(zero.clone(), (0..l).map(|m| a(m + 2).div(&a2, ctx)).collect());
    let mut coeffs = vec![sp];
    for k in 1..=l {
        let hk = h.powf(-(k as f64) / 2.0, ctx)?;
        coeffs.push(hk.coeff(k - 1, ctx).div_real(&ctx.int(k as i64), ctx));
    }
    Ok(BigSeries::new(zero, coeffs))
}

/// s(w) = s₊ + Σ_{k=1..L} s_k w^k from φ(s) − φ(s₊) = ½φ″(s₊)w².
pub fn revert_mapping(geom: &SaddleGeometry, l: usize) -> Result<TruncatedSeries> {
    Ok(revert_big(geom, l, &BigCtx::new(SERIES_DIGITS))?.to_series())
}

/// Amplitude functions of the three integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Amplitude {
    /// s^μ/√(s(1+s)), giving Y.
    PPos,
    /// (1+s)^μ/√(s(1+s)), giving U.
    PNeg,
    /// (1+s)^{−μ}/√(s(1+s)), giving F.
    QNeg,
}

impl Amplitude {
    fn exponents(&self, mu: f64) -> (f64, f64) {
        match self {
            Amplitude::PPos => (mu - 0.5, -0.5),
            Amplitude::PNeg => (-0.5, mu - 0.5),
            Amplitude::QNeg => (-0.5, -mu - 0.5),
        }
    }
}

/// F_0..F_K (or G_0..G_K) using a reversion of length L.
pub fn fk_coeffs_with_len(
    geom: &SaddleGeometry,
    mu: f64,
    amp: Amplitude,
    k_max: usize,
    l: usize,
) -> Result<Vec<Complex64>> {
    if l < 2 * k_max + 2 {
        return Err(Error::SeriesExhausted { required: 2 * k_max + 2 });
    }
    let ctx = &BigCtx::new(SERIES_DIGITS);
    let s = revert_big(geom, l, ctx)?;
    let sp = s.coeffs[0].clone();
    let s1 = sp.add(&BigComplex::one(ctx), ctx);
    let (ps, p1) = amp.exponents(mu);
    let mut tail = BigSeries::power(&s1, s1.powf(p1, ctx), p1, l + 1, ctx);
    tail.center = sp.clone();
    let amp_series = BigSeries::power(&sp, sp.powf(ps, ctx), ps, l + 1, ctx).mul(&tail, ctx);
    let f = amp_series.compose(&s, ctx).mul(&s.derivative(ctx), ctx);
    let phi2 = sp.powi(-2, ctx).add(&s1.powi(-2, ctx), ctx);
    let f0 = f.coeff(0, ctx);
    let mut out = Vec::with_capacity(k_max + 1);
    let mut half_poch = 1.0;
    let mut den = f0.clone();
    for k in 0..=k_max {
        let v = f.coeff(2 * k, ctx).mul_f64(half_poch * 2f64.powi(k as i32), ctx).div(&den, ctx);
        out.push(v.to_complex());
        half_poch *= 0.5 + k as f64;
        den = den.mul(&phi2, ctx);
    }
    Ok(out)
}

pub fn fk_coeffs(geom: &SaddleGeometry, mu: f64, amp: Amplitude, k_max: usize) -> Result<Vec<Complex64>> {
    fk_coeffs_with_len(geom, mu, amp, k_max, default_len(k_max))
}

fn default_len(k_max: usize) -> usize {
    DEFAULT_L.max(2 * k_max + 4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffKind {
    /// Y side.
    A,
    /// U side.
    B,
    /// F side.
    C,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryCoeffs {
    pub kind: CoeffKind,
    pub mu: f64,
    pub z: Complex64,
    pub values: Vec<Complex64>,
}

impl ElementaryCoeffs {
    /// Σ_{k≤K} values_k / ν^k and the modulus of the last term.
    pub fn sum(&self, nu: f64, k_max: usize) -> Complex64 {
        self.values.iter().take(k_max + 1).rev().fold(c(0.0), |acc, v| acc / nu + v)
    }
}

/// A_k, B_k or C_k for k = 0..=K.
pub fn elementary_coeffs(geom: &SaddleGeometry, mu: f64, kind: CoeffKind, k_max: usize) -> Result<ElementaryCoeffs> {
    let values = match kind {
        CoeffKind::A | CoeffKind::B => {
            let amp = if kind == CoeffKind::A { Amplitude::PPos } else { Amplitude::PNeg };
            let f = fk_coeffs(geom, mu, amp, k_max)?;
            let g = gamma_star_series(mu + 0.5, k_max as i64)?.coeffs;
            let mut a: Vec<Complex64> = Vec::with_capacity(k_max + 1);
            for k in 0..=k_max {
                let s: Complex64 = (0..k).map(|j| a[j] * g[k - j]).sum();
                a.push(f[k] - s);
            }
            a
        }
        CoeffKind::C => {
            let gk = fk_coeffs(geom, mu, Amplitude::QNeg, k_max)?;
            let g = gamma_star_series(0.5, k_max as i64)?.coeffs;
            (0..=k_max).map(|k| (0..=k).map(|j| if j % 2 == 0 { gk[j] } else { -gk[j] } * g[k - j]).sum()).collect()
        }
    };
    Ok(ElementaryCoeffs { kind, mu, z: geom.z, values })
}

/// (A, B, C) coefficient tables up to K.
pub fn abc_coeffs(
    geom: &SaddleGeometry,
    mu: f64,
    k_max: usize,
) -> Result<(ElementaryCoeffs, ElementaryCoeffs, ElementaryCoeffs)> {
    Ok((
        elementary_coeffs(geom, mu, CoeffKind::A, k_max)?,
        elementary_coeffs(geom, mu, CoeffKind::B, k_max)?,
        elementary_coeffs(geom, mu, CoeffKind::C, k_max)?,
    ))
}

/// Options shared by the sector expansions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorOptions {
    pub delta: f64,
    pub min_n: u64,
}

impl Default for SectorOptions {
    fn default() -> Self {
        SectorOptions { delta: DEFAULT_DELTA, min_n: 5 }
    }
}

fn check_n(params: &PolyParams, opts: &SectorOptions) -> Result<()> {
    if params.n < opts.min_n {
        return Err(Error::InvalidArgument(format!("n = {} below the minimum {}", params.n, opts.min_n)));
    }
    params.check_gamma_domain()
}

/// Sum of the coefficient series plus the relative size of the first omitted term.
fn series_with_estimate(coeffs: &ElementaryCoeffs, nu: f64, k_max: usize) -> (Complex64, f64) {
    let sum = coeffs.sum(nu, k_max);
    let next = coeffs.values[k_max + 1] / nu.powi(k_max as i32 + 1);
    (sum, next.norm() / sum.norm())
}

/// Y_n^μ(ζ) with ζ = 1/(νz), `params.z` being z.
pub fn eval_thm2(params: &PolyParams, k_max: usize, opts: &SectorOptions) -> Result<EvalReport> {
    check_n(params, opts)?;
    let geom = sector_geometry(params.z, opts.delta)?;
    let nu = params.nu();
    let z = geom.z;
    let coeffs = elementary_coeffs(&geom, params.mu, CoeffKind::A, k_max + 1)?;
    let (sum, err) = series_with_estimate(&coeffs, nu, k_max);
    // 1 − z + √(1+z²) = 1 + 1/(z + √(1+z²))
    let base = 1.0 + 1.0 / (z + geom.root);
    let ln_front = params.mu * base.ln() + geom.ln_common() + nu * (z - geom.eta);
    let value = ScaledComplex::exp(ln_front).mul_complex(sum);
    Ok(EvalReport::new(value, Method::ElementaryPos, k_max + 1, Some(err)))
}

/// The three reports of the expansion for Y_n^μ(−ζ).
#[derive(Clone, Debug, PartialEq)]
pub struct Thm3Reports {
    pub f: EvalReport,
    pub u: EvalReport,
    pub y: EvalReport,
}

/// F_n^μ(ζ), U_n^μ(ζ) and Y_n^μ(−ζ) = F + U with ζ = 1/(νz).
pub fn eval_thm3(params: &PolyParams, k_max: usize, opts: &SectorOptions) -> Result<Thm3Reports> {
    check_n(params, opts)?;
    let geom = sector_geometry(params.z, opts.delta)?;
    let nu = params.nu();
    let z = geom.z;
    let mu = params.mu;
    let b = elementary_coeffs(&geom, mu, CoeffKind::B, k_max + 1)?;
    let cc = elementary_coeffs(&geom, mu, CoeffKind::C, k_max + 1)?;
    let (sb, eb) = series_with_estimate(&b, nu, k_max);
    let (sc, ec) = series_with_estimate(&cc, nu, k_max);
    let plus = 1.0 + z + geom.root;
    // 1 + z − √(1+z²) = 2z/(1 + z + √(1+z²))
    let minus = 2.0 * z / plus;
    let common = geom.ln_common();
    let ln_u = mu * plus.ln() + common - nu * (z + geom.eta);
    let ln_f = mu * minus.ln() + common + nu * (geom.eta - z);
    let mut u = ScaledComplex::exp(ln_u).mul_complex(sb);
    if params.n % 2 == 1 {
        u = -u;
    }
    let f = ScaledComplex::exp(ln_f).mul_complex(sc);
    let y = f + u;
    let ey = ((f.abs().scale(ec) + u.abs().scale(eb)) / y.abs()).to_complex().re;
    Ok(Thm3Reports {
        f: EvalReport::new(f, Method::ElementaryNegF, k_max + 1, Some(ec)),
        u: EvalReport::new(u, Method::ElementaryNegU, k_max + 1, Some(eb)),
        y: EvalReport::new(y, Method::ElementaryNegU, k_max + 1, Some(ey)).with_note("sum of the F and U expansions"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel_uniform::{gen_uk, uk_eval};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn geometry_at_one() {
        let g = saddle_geometry(c(1.0)).unwrap();
        let r2 = 2f64.sqrt();
        assert!(close(g.s_plus, c(r2 / 2.0), 1e-15));
        assert!(close(g.s_minus, c(-r2 / 2.0), 1e-15));
        assert!(close(g.t, c(1.0 / r2), 1e-15));
        assert!(close(g.eta, c(r2 + (1.0 / (1.0 + r2)).ln()), 1e-15));
        assert!(close(g.phi2, c(4.0 * r2 / (1.0 + r2)), 1e-15));
        assert!((g.eta.re - 0.53283997).abs() < 1e-8);
    }

    #[test]
    fn geometry_refuses_boundary() {
        assert!(matches!(saddle_geometry(Complex64::new(0.0, 1.0)), Err(Error::SectorViolation { .. })));
        assert!(matches!(saddle_geometry(c(0.0)), Err(Error::ZeroArgument)));
        assert!(matches!(saddle_geometry(c(-1.0)), Err(Error::SectorViolation { .. })));
        // the coalescing saddles at z = i, reached without the sector check
        let g = geometry_unchecked(Complex64::new(0.0, 1.0) * (1.0 + 1e-12));
        assert!(close(g.s_minus, Complex64::new(-0.5, -0.5), 1e-5));
        let g = saddle_geometry(c(1e6)).unwrap();
        assert!((g.z - g.eta).norm() < 1e-5 && close(g.z * g.t, c(1.0), 1e-10));
    }

    #[test]
    fn saddles_solve_the_quadratic() {
        for &z in &[c(0.3), Complex64::new(1.0, 2.0), Complex64::from_polar(5.0, 1.4)] {
            let g = saddle_geometry(z).unwrap();
            for s in [g.s_plus, g.s_minus] {
                let q = 2.0 * z * s * s + 2.0 * (z - 1.0) * s - 1.0;
                assert!(q.norm() < 1e-13 * (2.0 * (z * s * s).norm() + 1.0));
            }
            assert!(close(g.s_plus * (1.0 + g.s_plus), (1.0 + g.root) / (2.0 * z * z), 1e-13));
        }
    }

    #[test]
    fn reversion_reproduces_the_mapping() {
        let g = saddle_geometry(Complex64::new(1.3, 0.4)).unwrap();
        let s = revert_mapping(&g, 16).unwrap();
        assert_eq!(s.coeff(1), c(1.0));
        let phi = |s: Complex64| 2.0 * g.z * s - s.ln() - (1.0 + s).ln();
        let w = c(0.05);
        let sw = s.eval(w);
        let lhs = phi(sw) - phi(g.s_plus);
        assert!(close(lhs, 0.5 * g.phi2 * w * w, 1e-12));
    }

    #[test]
    fn reversion_low_orders() {
        for &z in &[c(1.0), c(2.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)] {
            let g = saddle_geometry(z).unwrap();
            let s = revert_mapping(&g, 8).unwrap();
            let t = g.t;
            assert!(close(s.coeff(2), z * (2.0 - t) / 3.0, 1e-12));
            let s3 = (1.0 - t) * (5.0 * t.powi(3) - 6.0 * t * t + 2.0) / (18.0 * t * t);
            assert!(close(s.coeff(3), s3, 1e-12));
            let s4 =
                -z * (1.0 - t) * (40.0 * t.powi(4) - 65.0 * t.powi(3) + 24.0 * t * t - 2.0 * t + 4.0) / (135.0 * t * t);
            assert!(close(s.coeff(4), s4, 1e-12));
        }
    }

    #[test]
    fn first_coefficients_match_closed_forms() {
        let mu = 4.25;
        let z = c(1.0);
        let g = saddle_geometry(z).unwrap();
        let t = g.t;
        let (a, b, cc) = abc_coeffs(&g, mu, 2).unwrap();
        let a1 = t * (5.0 * t * t - 3.0) / 24.0 - mu * t * t * (z + 1.0) / 4.0 + mu * mu * (t * z - 1.0) / 4.0;
        assert!(close(a.values[1], a1, 1e-10));
        assert_eq!(a.values[0], c(1.0));
        assert_eq!(b.values[0], c(1.0));
        assert!((cc.values[0] - 1.0).norm() < 1e-15);
        let z = c(2.0);
        let g = saddle_geometry(z).unwrap();
        let t = g.t;
        let (_, b, cc) = abc_coeffs(&g, 1.0, 1).unwrap();
        let b1 = t * (5.0 * t * t - 3.0) / 24.0 + t * t * (z - 1.0) / 4.0 - (z * t + 1.0) / 4.0;
        let c1 = -t * (5.0 * t * t - 3.0) / 24.0 + t * t * (z - 1.0) / 4.0 + (z * t - 1.0) / 4.0;
        assert!(close(b.values[1], b1, 1e-10));
        assert!(close(cc.values[1], c1, 1e-10));
    }

    #[test]
    fn mu_zero_collapse() {
        let u = gen_uk(4);
        for &z in &[c(0.5), c(1.5), Complex64::from_polar(2.0, 0.9)] {
            let g = saddle_geometry(z).unwrap();
            let a = elementary_coeffs(&g, 0.0, CoeffKind::A, 4).unwrap();
            for (k, uk) in u.iter().enumerate() {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert!(close(a.values[k], sign * uk_eval(uk, g.t), 1e-9), "k={k} z={z}");
            }
        }
    }

    #[test]
    fn coefficients_vanish_at_large_z() {
        let g = saddle_geometry(c(1e6)).unwrap();
        let a = elementary_coeffs(&g, 4.25, CoeffKind::A, 4).unwrap();
        for k in 1..=4 {
            assert!(a.values[k].norm() <= 1e-4);
        }
    }

    #[test]
    fn real_inputs_give_real_coefficients() {
        let g = saddle_geometry(c(0.8)).unwrap();
        let (a, b, cc) = abc_coeffs(&g, 2.7, 4).unwrap();
        for v in a.values.iter().chain(&b.values).chain(&cc.values) {
            assert!(v.im.abs() <= 1e-12 * v.norm().max(1e-300));
        }
    }

    #[test]
    fn sector_and_degree_guards() {
        let o = SectorOptions::default();
        let near_axis = Complex64::from_polar(1.0, FRAC_PI_2 - 0.01);
        assert!(matches!(eval_thm2(&PolyParams::new(50, 1.0, near_axis), 4, &o), Err(Error::SectorViolation { .. })));
        assert!(eval_thm2(&PolyParams::real(3, 1.0, 1.0), 4, &o).is_err());
        assert!(eval_thm3(&PolyParams::real(50, 1.0, -1.0), 4, &o).is_err());
    }

    #[test]
    fn positive_expansion_against_oracle() {
        use crate::exact_core::exact_at_zeta;
        use crate::scaled_arith::BigCtx;
        let ctx = BigCtx::default();
        let o = SectorOptions::default();
        for &(n, mu, z, tol) in &[(40u64, 0.0, 1.5, 1e-6), (100, 4.25, 1.0, 2e-8)] {
            let r = eval_thm2(&PolyParams::real(n, mu, z), 4, &o).unwrap();
            let y = exact_at_zeta(n, mu, c(z), false, &ctx).unwrap().value.to_scaled();
            let d = r.value.rel_diff(&y);
            assert!(d <= tol, "n={n} mu={mu} z={z}: {d:e}");
            assert!(r.err_estimate.unwrap() < 1e-3);
        }
    }

    #[test]
    fn split_expansion_against_oracle() {
        use crate::exact_core::{exact_at_zeta, kummer_split};
        use crate::scaled_arith::BigCtx;
        let ctx = BigCtx::default();
        let o = SectorOptions::default();
        let (n, mu, z) = (100u64, 4.25, 1.0);
        let r = eval_thm3(&PolyParams::real(n, mu, z), 4, &o).unwrap();
        let y = exact_at_zeta(n, mu, c(z), true, &ctx).unwrap().value.to_scaled();
        assert!(r.y.value.rel_diff(&y) <= 1e-8);
        let nu = n as f64 + 0.5;
        let split = kummer_split(&PolyParams::real(n, mu, nu * z), 1e-20, &ctx).unwrap();
        assert!(r.f.value.rel_diff(&split.f_scaled()) <= 1e-8);
        assert!(r.u.value.rel_diff(&split.u_scaled()) <= 1e-6);
        let r8 = eval_thm3(&PolyParams::real(n, mu, z), 8, &o).unwrap();
        assert!(r8.u.value.rel_diff(&split.u_scaled()) <= 1e-11);
        // sign of U alternates with n, F keeps its sign
        let a = eval_thm3(&PolyParams::real(50, mu, z), 4, &o).unwrap();
        let b = eval_thm3(&PolyParams::real(51, mu, z), 4, &o).unwrap();
        assert!(a.u.value.to_complex().re * b.u.value.to_complex().re < 0.0);
        assert!(a.f.value.to_complex().re * b.f.value.to_complex().re > 0.0);
    }

    #[test]
    fn split_mu_zero_u_is_a_bessel_k() {
        use crate::bessel_uniform::exact_half_integer_k;
        use crate::scaled_arith::BigCtx;
        // U_n^0(1/x) = (−1)^n √(2x/π) e^{−x} K_{n+1/2}(x), x = νz
        let ctx = BigCtx::default();
        let (n, z) = (40u64, 1.2);
        let nu = n as f64 + 0.5;
        let x = nu * z;
        let r = eval_thm3(&PolyParams::real(n, 0.0, z), 4, &SectorOptions::default()).unwrap();
        let k = exact_half_integer_k(n, c(x), &ctx).unwrap();
        let u = k.scale((2.0 * x / std::f64::consts::PI).sqrt()) * ScaledComplex::exp(c(-x));
        assert!(r.u.value.rel_diff(&u) <= 1e-6);
    }
}
