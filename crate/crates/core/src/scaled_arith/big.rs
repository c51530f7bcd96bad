//! Configurable-precision complex arithmetic.
//!
//! The working precision is carried by an explicit [`BigCtx`]; nothing is
//! global. A context owns its constants cache and is cheap to build, so
//! parallel code creates one per thread.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_complex::Complex64;

use super::scaled::{ldexp, ScaledComplex};

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in significant decimal digits.
pub const DEFAULT_DIGITS: u32 = 60;

pub struct BigCtx {
    digits: u32,
    bits: usize,
    consts: RefCell<Consts>,
}

impl BigCtx {
    pub fn new(digits: u32) -> Self {
        let digits = digits.max(10);
        let raw = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64;
        let bits = raw.div_ceil(64) * 64;
        BigCtx { digits, bits, consts: RefCell::new(Consts::new().expect("constants cache")) }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// `10^-P`, the nominal unit roundoff of this context.
    pub fn unit(&self) -> f64 {
        10f64.powi(-(self.digits as i32))
    }

    /// A context with twice the digits.
    pub fn doubled(&self) -> BigCtx {
        BigCtx::new(self.digits * 2)
    }

    pub fn pi(&self) -> BigFloat {
        self.consts.borrow_mut().pi(self.bits, RM)
    }

    pub(crate) fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits)
    }

    pub(crate) fn int(&self, k: i64) -> BigFloat {
        BigFloat::from_i64(k, self.bits)
    }

    pub(crate) fn bigint(&self, k: &BigInt) -> BigFloat {
        BigFloat::parse(&k.to_string(), Radix::Dec, self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub(crate) fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub(crate) fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub(crate) fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub(crate) fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub(crate) fn ln(&self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub(crate) fn exp(&self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub(crate) fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    fn sin_cos(&self, a: &BigFloat) -> (BigFloat, BigFloat) {
        let mut cc = self.consts.borrow_mut();
        (a.sin(self.bits, RM, &mut cc), a.cos(self.bits, RM, &mut cc))
    }

    fn atan2(&self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        if x.is_zero() {
            let half_pi = self.div(&self.pi(), &self.int(2));
            return if y.is_negative() {
                half_pi.neg()
            } else if y.is_zero() {
                y.clone()
            } else {
                half_pi
            };
        }
        let base = self.div(y, x).atan(self.bits, RM, &mut self.consts.borrow_mut());
        if x.is_positive() {
            base
        } else if y.is_negative() {
            self.sub(&base, &self.pi())
        } else {
            self.add(&base, &self.pi())
        }
    }
}

impl fmt::Debug for BigCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BigCtx").field("digits", &self.digits).field("bits", &self.bits).finish()
    }
}

impl Default for BigCtx {
    fn default() -> Self {
        BigCtx::new(DEFAULT_DIGITS)
    }
}

/// `(mantissa, exp2)` with `mantissa` in `[0.5, 1)` (or zero).
pub(crate) fn big_to_parts(x: &BigFloat) -> (f64, i64) {
    if x.is_zero() {
        return (0.0, 0);
    }
    let Some((words, _, sign, e, _)) = x.as_raw_parts() else {
        return (f64::NAN, 0);
    };
    let top = *words.last().unwrap_or(&0);
    let next = if words.len() >= 2 { words[words.len() - 2] } else { 0 };
    let m = (top as f64 + next as f64 * 2f64.powi(-64)) * 2f64.powi(-64);
    let m = if sign == Sign::Neg { -m } else { m };
    (m, e as i64)
}

pub(crate) fn big_to_f64(x: &BigFloat) -> f64 {
    let (m, e) = big_to_parts(x);
    ldexp(m, e)
}

/// Complex number whose components are configurable-precision floats.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero(ctx: &BigCtx) -> Self {
        Self::from_f64(0.0, ctx)
    }

    pub fn one(ctx: &BigCtx) -> Self {
        Self::from_f64(1.0, ctx)
    }

    pub fn from_f64(x: f64, ctx: &BigCtx) -> Self {
        BigComplex { re: ctx.real(x), im: ctx.real(0.0) }
    }

    pub fn from_i64(k: i64, ctx: &BigCtx) -> Self {
        BigComplex { re: ctx.int(k), im: ctx.real(0.0) }
    }

    pub fn from_complex(z: Complex64, ctx: &BigCtx) -> Self {
        BigComplex { re: ctx.real(z.re), im: ctx.real(z.im) }
    }

    pub fn from_real(x: BigFloat, ctx: &BigCtx) -> Self {
        BigComplex { re: x, im: ctx.real(0.0) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, o: &Self, ctx: &BigCtx) -> Self {
        BigComplex { re: ctx.add(&self.re, &o.re), im: ctx.add(&self.im, &o.im) }
    }

    pub fn sub(&self, o: &Self, ctx: &BigCtx) -> Self {
        BigComplex { re: ctx.sub(&self.re, &o.re), im: ctx.sub(&self.im, &o.im) }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self, ctx: &BigCtx) -> Self {
        if self.is_real() && o.is_real() {
            return BigComplex { re: ctx.mul(&self.re, &o.re), im: ctx.real(0.0) };
        }
        let re = ctx.sub(&ctx.mul(&self.re, &o.re), &ctx.mul(&self.im, &o.im));
        let im = ctx.add(&ctx.mul(&self.re, &o.im), &ctx.mul(&self.im, &o.re));
        BigComplex { re, im }
    }

    pub fn mul_real(&self, x: &BigFloat, ctx: &BigCtx) -> Self {
        BigComplex { re: ctx.mul(&self.re, x), im: ctx.mul(&self.im, x) }
    }

    pub fn mul_f64(&self, x: f64, ctx: &BigCtx) -> Self {
        self.mul_real(&ctx.real(x), ctx)
    }

    pub fn div_real(&self, x: &BigFloat, ctx: &BigCtx) -> Self {
        BigComplex { re: ctx.div(&self.re, x), im: ctx.div(&self.im, x) }
    }

    pub fn div(&self, o: &Self, ctx: &BigCtx) -> Self {
        if o.is_real() {
            return self.div_real(&o.re, ctx);
        }
        let den = ctx.add(&ctx.mul(&o.re, &o.re), &ctx.mul(&o.im, &o.im));
        let re = ctx.add(&ctx.mul(&self.re, &o.re), &ctx.mul(&self.im, &o.im));
        let im = ctx.sub(&ctx.mul(&self.im, &o.re), &ctx.mul(&self.re, &o.im));
        BigComplex { re: ctx.div(&re, &den), im: ctx.div(&im, &den) }
    }

    pub fn recip(&self, ctx: &BigCtx) -> Self {
        Self::one(ctx).div(self, ctx)
    }

    /// Squared modulus.
    pub fn norm_sqr(&self, ctx: &BigCtx) -> BigFloat {
        ctx.add(&ctx.mul(&self.re, &self.re), &ctx.mul(&self.im, &self.im))
    }

    pub fn abs(&self, ctx: &BigCtx) -> BigFloat {
        if self.is_real() {
            return self.re.abs();
        }
        ctx.sqrt(&self.norm_sqr(ctx))
    }

    pub fn exp(&self, ctx: &BigCtx) -> Self {
        let mag = ctx.exp(&self.re);
        if self.im.is_zero() {
            return BigComplex::from_real(mag, ctx);
        }
        let (s, c) = ctx.sin_cos(&self.im);
        BigComplex { re: ctx.mul(&mag, &c), im: ctx.mul(&mag, &s) }
    }

    /// Principal logarithm.
    pub fn ln(&self, ctx: &BigCtx) -> Self {
        if self.is_real() && self.re.is_positive() {
            return BigComplex::from_real(ctx.ln(&self.re), ctx);
        }
        let half = ctx.real(0.5);
        let re = ctx.mul(&ctx.ln(&self.norm_sqr(ctx)), &half);
        BigComplex { re, im: ctx.atan2(&self.im, &self.re) }
    }

    /// Principal power with a real exponent.
    pub fn powf(&self, p: f64, ctx: &BigCtx) -> Self {
        if self.is_zero() {
            return if p == 0.0 { Self::one(ctx) } else { Self::zero(ctx) };
        }
        if p.fract() == 0.0 && p.abs() < 1e6 {
            return self.powi(p as i64, ctx);
        }
        self.ln(ctx).mul_f64(p, ctx).exp(ctx)
    }

    pub fn powi(&self, n: i64, ctx: &BigCtx) -> Self {
        if n < 0 {
            return self.powi(-n, ctx).recip(ctx);
        }
        let mut base = self.clone();
        let mut acc = Self::one(ctx);
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ctx);
            }
        }
        acc
    }

    pub fn to_scaled(&self) -> ScaledComplex {
        let (mr, er) = big_to_parts(&self.re);
        let (mi, ei) = big_to_parts(&self.im);
        if mr == 0.0 && mi == 0.0 {
            return ScaledComplex::ZERO;
        }
        let e = if mr == 0.0 {
            ei
        } else if mi == 0.0 {
            er
        } else {
            er.max(ei)
        };
        ScaledComplex::normalize(Complex64::new(ldexp(mr, er - e), ldexp(mi, ei - e)), e)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(big_to_f64(&self.re), big_to_f64(&self.im))
    }

    /// `|self - other| / |other|` as a double.
    pub fn rel_diff(&self, other: &Self, ctx: &BigCtx) -> f64 {
        let d = self.sub(other, ctx).abs(ctx);
        let o = other.abs(ctx);
        if o.is_zero() {
            return if d.is_zero() { 0.0 } else { f64::INFINITY };
        }
        big_to_f64(&ctx.div(&d, &o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn precision_bits_cover_digits() {
        let ctx = BigCtx::new(60);
        assert!(ctx.bits() as f64 >= 60.0 * std::f64::consts::LOG2_10 + 32.0);
        assert_eq!(ctx.bits() % 64, 0);
    }

    #[test]
    fn conversion_to_scaled() {
        let ctx = BigCtx::default();
        let x = BigComplex::from_complex(Complex64::new(-6.5, 0.125), &ctx);
        assert_eq!(x.to_scaled().to_complex(), Complex64::new(-6.5, 0.125));
        let big = BigComplex::from_f64(10.0, &ctx).powi(489, &ctx);
        assert!((big.to_scaled().log10_abs() - 489.0).abs() < 1e-12);
    }

    #[test]
    fn transcendental_identities() {
        let ctx = BigCtx::new(80);
        let z = BigComplex::from_complex(Complex64::new(0.3, -2.2), &ctx);
        let back = z.ln(&ctx).exp(&ctx);
        assert!(back.rel_diff(&z, &ctx) < 1e-75);
        let w = BigComplex::from_complex(Complex64::new(-1.0, -1.0), &ctx);
        let arg = big_to_f64(&w.ln(&ctx).im);
        assert!((arg + 0.75 * std::f64::consts::PI).abs() < 1e-15);
        // sqrt(2)^2 via powf
        let two = BigComplex::from_f64(2.0, &ctx);
        let s = two.powf(0.5, &ctx);
        assert!(s.mul(&s, &ctx).rel_diff(&two, &ctx) < 1e-75);
    }

    #[test]
    fn products_agree_with_scaled() {
        let ctx = BigCtx::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let a = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let b = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let ea: i64 = rng.gen_range(-2000..2000);
            let eb: i64 = rng.gen_range(-2000..2000);
            let sa = ScaledComplex::normalize(a, ea);
            let sb = ScaledComplex::normalize(b, eb);
            let two = BigComplex::from_f64(2.0, &ctx);
            let ba = BigComplex::from_complex(sa.mantissa(), &ctx).mul(&two.powi(sa.exp2(), &ctx), &ctx);
            let bb = BigComplex::from_complex(sb.mantissa(), &ctx).mul(&two.powi(sb.exp2(), &ctx), &ctx);
            let exact = ba.mul(&bb, &ctx).to_scaled();
            assert!((sa * sb).rel_diff(&exact) < 1e-14);
        }
    }
}
