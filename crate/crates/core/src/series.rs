//! Truncated power series in double-precision complex arithmetic.
//!
//! A series holds coefficients c_0..c_{L-1} of Σ c_k (x − center)^k. Binary
//! operations truncate to the shorter length. [`BigSeries`] is the same
//! structure over configurable-precision coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scaled_arith::{BigComplex, BigCtx};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    pub center: Complex64,
    pub coeffs: Vec<Complex64>,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl TruncatedSeries {
    pub fn new(center: Complex64, coeffs: Vec<Complex64>) -> Self {
        TruncatedSeries { center, coeffs }
    }

    pub fn zero(center: Complex64, len: usize) -> Self {
        Self::new(center, vec![c(0.0); len])
    }

    pub fn constant(center: Complex64, value: Complex64, len: usize) -> Self {
        let mut s = Self::zero(center, len);
        if len > 0 {
            s.coeffs[0] = value;
        }
        s
    }

    /// The series of `x` itself about `center`: center + (x − center).
    pub fn variable(center: Complex64, len: usize) -> Self {
        let mut s = Self::constant(center, center, len);
        if len > 1 {
            s.coeffs[1] = c(1.0);
        }
        s
    }

    /// (base + σ)^p = base^p (1 + σ/base)^p with the principal branch of base^p.
    pub fn binomial(center: Complex64, base: Complex64, p: f64, len: usize) -> Result<Self> {
        if base.norm() == 0.0 {
            return Err(Error::DivisionByZero("binomial series at a zero base"));
        }
        let mut coeffs = Vec::with_capacity(len);
        let mut term = if p == 0.0 { c(1.0) } else { base.powf(p) };
        for k in 0..len {
            coeffs.push(term);
            term = term * (p - k as f64) / ((k + 1) as f64) / base;
        }
        Ok(Self::new(center, coeffs))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(c(0.0))
    }

    pub fn truncate(mut self, len: usize) -> Self {
        self.coeffs.truncate(len);
        self
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::new(self.center, self.coeffs.iter().map(|x| x * a).collect())
    }

    pub fn recip(&self) -> Result<Self> {
        let a0 = self.coeff(0);
        if a0.norm() == 0.0 {
            return Err(Error::DivisionByZero("series with zero constant term"));
        }
        let n = self.len();
        let mut b = vec![c(0.0); n];
        if n > 0 {
            b[0] = 1.0 / a0;
        }
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|j| self.coeffs[j] * b[k - j]).sum();
            b[k] = -s / a0;
        }
        Ok(Self::new(self.center, b))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// `self^p` for a series with nonzero constant term, principal branch for
    /// the constant.
    pub fn powf(&self, p: f64) -> Result<Self> {
        let a0 = self.coeff(0);
        if a0.norm() == 0.0 {
            return Err(Error::DivisionByZero("power of a series with zero constant term"));
        }
        let n = self.len();
        let mut b = vec![c(0.0); n];
        if n == 0 {
            return Ok(Self::new(self.center, b));
        }
        b[0] = a0.powf(p);
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|j| self.coeffs[j] * b[k - j] * ((p + 1.0) * j as f64 - k as f64)).sum();
            b[k] = s / (a0 * k as f64);
        }
        Ok(Self::new(self.center, b))
    }

    /// Derivative; one coefficient shorter.
    pub fn derivative(&self) -> Self {
        Self::new(self.center, self.coeffs.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect())
    }

    /// `self(inner(x))` where `inner` has constant term equal to `self.center`.
    /// The result is centered at `inner.center`.
    pub fn compose(&self, inner: &Self) -> Self {
        let n = self.len().min(inner.len());
        let mut shifted = inner.clone().truncate(n);
        if n > 0 {
            shifted.coeffs[0] -= self.center;
        }
        let mut acc = Self::zero(inner.center, n);
        for a in self.coeffs.iter().take(n).rev() {
            acc = &acc * &shifted;
            if n > 0 {
                acc.coeffs[0] += a;
            }
        }
        acc
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let d = x - self.center;
        self.coeffs.iter().rev().fold(c(0.0), |acc, a| acc * d + a)
    }

    /// Divide by (x − center) when the constant term is zero; drops it.
    pub fn shift_down(&self) -> Self {
        Self::new(self.center, self.coeffs.iter().skip(1).copied().collect())
    }

    /// Multiply by (x − center).
    pub fn shift_up(&self) -> Self {
        let mut coeffs = vec![c(0.0)];
        coeffs.extend(self.coeffs.iter().take(self.len().saturating_sub(1)));
        Self::new(self.center, coeffs)
    }
}

/// Truncated power series with [`BigComplex`] coefficients; the working
/// precision is supplied per operation.
#[derive(Clone, Debug)]
pub struct BigSeries {
    pub center: BigComplex,
    pub coeffs: Vec<BigComplex>,
}

impl BigSeries {
    pub fn new(center: BigComplex, coeffs: Vec<BigComplex>) -> Self {
        BigSeries { center, coeffs }
    }

    pub fn constant(center: &BigComplex, value: BigComplex, len: usize, ctx: &BigCtx) -> Self {
        let mut coeffs = vec![BigComplex::zero(ctx); len];
        if len > 0 {
            coeffs[0] = value;
        }
        Self::new(center.clone(), coeffs)
    }

    /// The series of `x` itself about `center`.
    pub fn variable(center: &BigComplex, len: usize, ctx: &BigCtx) -> Self {
        let mut s = Self::constant(center, center.clone(), len, ctx);
        if len > 1 {
            s.coeffs[1] = BigComplex::one(ctx);
        }
        s
    }

    /// (center + σ)^p with a prescribed value of center^p.
    pub fn power(center: &BigComplex, value: BigComplex, p: f64, len: usize, ctx: &BigCtx) -> Self {
        let mut coeffs = Vec::with_capacity(len);
        let mut term = value;
        for k in 0..len {
            let next = term.mul_f64(p - k as f64, ctx).div_real(&ctx.int(k as i64 + 1), ctx).div(center, ctx);
            coeffs.push(term);
            term = next;
        }
        Self::new(center.clone(), coeffs)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize, ctx: &BigCtx) -> BigComplex {
        self.coeffs.get(k).cloned().unwrap_or_else(|| BigComplex::zero(ctx))
    }

    pub fn add(&self, o: &Self, ctx: &BigCtx) -> Self {
        let n = self.len().min(o.len());
        Self::new(self.center.clone(), (0..n).map(|k| self.coeffs[k].add(&o.coeffs[k], ctx)).collect())
    }

    pub fn sub(&self, o: &Self, ctx: &BigCtx) -> Self {
        let n = self.len().min(o.len());
        Self::new(self.center.clone(), (0..n).map(|k| self.coeffs[k].sub(&o.coeffs[k], ctx)).collect())
    }

    pub fn scale(&self, a: &BigComplex, ctx: &BigCtx) -> Self {
        Self::new(self.center.clone(), self.coeffs.iter().map(|x| x.mul(a, ctx)).collect())
    }

    pub fn mul(&self, o: &Self, ctx: &BigCtx) -> Self {
        let n = self.len().min(o.len());
        let mut out = vec![BigComplex::zero(ctx); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&o.coeffs[j], ctx), ctx);
            }
        }
        Self::new(self.center.clone(), out)
    }

    pub fn recip(&self, ctx: &BigCtx) -> Result<Self> {
        let a0 = self.coeff(0, ctx);
        if a0.is_zero() {
            return Err(Error::DivisionByZero("series with zero constant term"));
        }
        let inv = a0.recip(ctx);
        let n = self.len();
        let mut b: Vec<BigComplex> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                b.push(inv.clone());
                continue;
            }
            let mut s = BigComplex::zero(ctx);
            for j in 1..=k {
                s = s.add(&self.coeffs[j].mul(&b[k - j], ctx), ctx);
            }
            b.push(s.mul(&inv, ctx).neg());
        }
        Ok(Self::new(self.center.clone(), b))
    }

    pub fn div(&self, o: &Self, ctx: &BigCtx) -> Result<Self> {
        Ok(self.mul(&o.recip(ctx)?, ctx))
    }

    /// Principal power of a series with nonzero constant term, from h g′ = p h′ g.
    pub fn powf(&self, p: f64, ctx: &BigCtx) -> Result<Self> {
        let a0 = self.coeff(0, ctx);
        if a0.is_zero() {
            return Err(Error::DivisionByZero("power of a series with zero constant term"));
        }
        let inv = a0.recip(ctx);
        let n = self.len();
        let mut g: Vec<BigComplex> = Vec::with_capacity(n);
        g.push(a0.powf(p, ctx));
        for m in 1..n {
            let mut s = BigComplex::zero(ctx);
            for k in 1..=m {
                let w = p * k as f64 - (m - k) as f64;
                s = s.add(&self.coeffs[k].mul(&g[m - k], ctx).mul_f64(w, ctx), ctx);
            }
            g.push(s.mul(&inv, ctx).div_real(&ctx.int(m as i64), ctx));
        }
        Ok(Self::new(self.center.clone(), g))
    }

    /// self(inner(x)) about inner's center; inner's constant term should equal self's center.
    pub fn compose(&self, inner: &Self, ctx: &BigCtx) -> Self {
        let n = self.len().min(inner.len());
        let mut acc = Self::constant(&inner.center, BigComplex::zero(ctx), n, ctx);
        if n == 0 {
            return acc;
        }
        let mut shifted = Self::new(inner.center.clone(), inner.coeffs[..n].to_vec());
        shifted.coeffs[0] = shifted.coeffs[0].sub(&self.center, ctx);
        for a in self.coeffs.iter().take(n).rev() {
            acc = acc.mul(&shifted, ctx);
            acc.coeffs[0] = acc.coeffs[0].add(a, ctx);
        }
        acc
    }

    /// Derivative; one coefficient shorter.
    pub fn derivative(&self, ctx: &BigCtx) -> Self {
        Self::new(
            self.center.clone(),
            self.coeffs.iter().enumerate().skip(1).map(|(k, a)| a.mul_real(&ctx.int(k as i64), ctx)).collect(),
        )
    }

    /// Drop the constant term, dividing by (x − center).
    pub fn shift_down(&self) -> Self {
        Self::new(self.center.clone(), self.coeffs.iter().skip(1).cloned().collect())
    }

    /// Value at `center + offset`.
    pub fn eval_offset(&self, offset: &BigComplex, ctx: &BigCtx) -> BigComplex {
        self.coeffs.iter().rev().fold(BigComplex::zero(ctx), |acc, a| acc.mul(offset, ctx).add(a, ctx))
    }

    pub fn to_series(&self) -> TruncatedSeries {
        TruncatedSeries::new(self.center.to_complex(), self.coeffs.iter().map(BigComplex::to_complex).collect())
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.len().min(rhs.len());
        TruncatedSeries::new(self.center, (0..n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect())
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.len().min(rhs.len());
        TruncatedSeries::new(self.center, (0..n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect())
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(c(-1.0))
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.len().min(rhs.len());
        let mut out = vec![c(0.0); n];
        for i in 0..n {
            if self.coeffs[i] == c(0.0) {
                continue;
            }
            for j in 0..n - i {
                out[i + j] += self.coeffs[i] * rhs.coeffs[j];
            }
        }
        TruncatedSeries::new(self.center, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z0() -> Complex64 {
        c(0.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn exp_log_style_identities() {
        // (1+x)^(1/2) squared is 1+x
        let s = TruncatedSeries::binomial(z0(), c(1.0), 0.5, 10).unwrap();
        let sq = &s * &s;
        assert!(close(sq.coeff(0), c(1.0), 1e-15) && close(sq.coeff(1), c(1.0), 1e-15));
        for k in 2..10 {
            assert!(sq.coeff(k).norm() < 1e-15);
        }
        // power via recurrence matches binomial
        let lin = TruncatedSeries::new(z0(), vec![c(2.0), c(1.0), c(0.0), c(0.0), c(0.0), c(0.0)]);
        let p = lin.powf(-1.5).unwrap();
        let b = TruncatedSeries::binomial(z0(), c(2.0), -1.5, 6).unwrap();
        for k in 0..6 {
            assert!(close(p.coeff(k), b.coeff(k), 1e-14));
        }
    }

    #[test]
    fn compose_and_eval() {
        // 1/(1-x) composed with x + x^2
        let geo = TruncatedSeries::new(z0(), vec![c(1.0); 8]);
        let inner = TruncatedSeries::new(z0(), vec![c(0.0), c(1.0), c(1.0), c(0.0), c(0.0), c(0.0), c(0.0), c(0.0)]);
        let comp = geo.compose(&inner);
        let x = c(0.01);
        let exact = 1.0 / (1.0 - x - x * x);
        assert!(close(comp.eval(x), exact, 1e-13));
        assert!(close(comp.derivative().eval(c(0.0)), c(1.0), 1e-15));
    }

    proptest! {
        #[test]
        fn recip_is_inverse(a0 in 0.5f64..3.0, a1 in -2.0f64..2.0, a2 in -2.0f64..2.0, b in -1.0f64..1.0) {
            let s = TruncatedSeries::new(z0(), vec![Complex64::new(a0, b), c(a1), c(a2), Complex64::new(0.0, b)]);
            let p = &s * &s.recip().unwrap();
            prop_assert!(close(p.coeff(0), c(1.0), 1e-13));
            for k in 1..4 {
                prop_assert!(p.coeff(k).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn big_powf_squares_back() {
        let ctx = BigCtx::new(40);
        let zero = BigComplex::zero(&ctx);
        let h = BigSeries::new(
            zero,
            [c(1.0), Complex64::new(0.3, -0.2), c(-0.7), Complex64::new(0.1, 0.4), c(0.05)]
                .iter()
                .map(|&x| BigComplex::from_complex(x, &ctx))
                .collect(),
        );
        let r = h.powf(-0.5, &ctx).unwrap();
        let back = r.powf(-2.0, &ctx).unwrap();
        for k in 0..h.len() {
            assert!(back.coeff(k, &ctx).rel_diff(&h.coeff(k, &ctx), &ctx) < 1e-35);
        }
        let double = h.to_series().powf(-0.5).unwrap();
        for k in 0..h.len() {
            assert!(close(r.coeff(k, &ctx).to_complex(), double.coeff(k), 1e-13));
        }
    }

    #[test]
    fn big_compose_matches_double() {
        let ctx = BigCtx::new(40);
        let outer = TruncatedSeries::new(c(0.5), vec![c(1.0), c(2.0), Complex64::new(0.0, 1.0), c(-0.5), c(0.25)]);
        let inner = TruncatedSeries::new(z0(), vec![c(0.5), c(1.0), c(0.3), Complex64::new(0.2, -0.1), c(0.0)]);
        let big = |s: &TruncatedSeries| {
            BigSeries::new(
                BigComplex::from_complex(s.center, &ctx),
                s.coeffs.iter().map(|&x| BigComplex::from_complex(x, &ctx)).collect(),
            )
        };
        let got = big(&outer).compose(&big(&inner), &ctx).to_series();
        let want = outer.compose(&inner);
        for k in 0..5 {
            assert!(close(got.coeff(k), want.coeff(k), 1e-14));
        }
    }
}
