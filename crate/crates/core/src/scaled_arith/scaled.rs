//! Overflow-free complex numbers stored as `mantissa * 2^exp2`.
//!
//! Polynomial values in this crate reach magnitudes like `10^489`, far beyond
//! `f64`. A [`ScaledComplex`] keeps a double-precision complex mantissa with
//! `1 <= max(|re|, |im|) < 2` and carries the binary scale in an `i64`, so
//! every rescaling is exact.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// `ln 2` split into a high part with trailing zero bits and a correction,
/// for exact-ish range reduction in [`ScaledComplex::exp`].
const LN2_HI: f64 = 6.931_471_803_691_238e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;

/// Multiply `x` by `2^k` without intermediate overflow or double rounding
/// (for results in the normal range).
pub fn ldexp(mut x: f64, mut k: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    while k > 1000 {
        x *= f64::from_bits(((1023 + 1000) as u64) << 52);
        k -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1000 {
        x *= f64::from_bits(((1023 - 1000) as u64) << 52);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * f64::from_bits(((1023 + k) as u64) << 52)
}

/// Binary exponent `e` with `2^e <= |x| < 2^(e+1)`; `x` must be finite and nonzero.
pub fn ilogb(x: f64) -> i64 {
    debug_assert!(x != 0.0 && x.is_finite());
    let bits = x.abs().to_bits();
    let biased = (bits >> 52) as i64;
    if biased == 0 {
        // subnormal
        let y = x.abs() * f64::from_bits(((1023 + 64) as u64) << 52);
        return ((y.to_bits() >> 52) as i64) - 1023 - 64;
    }
    biased - 1023
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledComplex {
    mant: Complex64,
    exp2: i64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex { mant: Complex64 { re: 0.0, im: 0.0 }, exp2: 0 };
    pub const ONE: ScaledComplex = ScaledComplex { mant: Complex64 { re: 1.0, im: 0.0 }, exp2: 0 };

    /// Canonical form of `mant * 2^exp2`. Only power-of-two scaling is
    /// applied to the mantissa, so the represented value is unchanged.
    pub fn normalize(mant: Complex64, exp2: i64) -> Self {
        if mant.re == 0.0 && mant.im == 0.0 {
            return Self::ZERO;
        }
        if !(mant.re.is_finite() && mant.im.is_finite()) {
            return ScaledComplex { mant, exp2 };
        }
        let m = mant.re.abs().max(mant.im.abs());
        let e = ilogb(m);
        ScaledComplex { mant: Complex64::new(ldexp(mant.re, -e), ldexp(mant.im, -e)), exp2: exp2 + e }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::normalize(z, 0)
    }

    pub fn from_f64(x: f64) -> Self {
        Self::normalize(Complex64::new(x, 0.0), 0)
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mant
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mant.re.is_finite() && self.mant.im.is_finite()
    }

    /// Plain complex value; overflows to infinity or underflows to zero
    /// outside the `f64` range.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ldexp(self.mant.re, self.exp2), ldexp(self.mant.im, self.exp2))
    }

    pub fn re(&self) -> ScaledComplex {
        Self::normalize(Complex64::new(self.mant.re, 0.0), self.exp2)
    }

    pub fn im(&self) -> ScaledComplex {
        Self::normalize(Complex64::new(self.mant.im, 0.0), self.exp2)
    }

    pub fn conj(&self) -> ScaledComplex {
        ScaledComplex { mant: self.mant.conj(), exp2: self.exp2 }
    }

    /// Modulus as a scaled real (imaginary part zero).
    pub fn abs(&self) -> ScaledComplex {
        Self::normalize(Complex64::new(self.mant.norm(), 0.0), self.exp2)
    }

    /// `ln |x|`, finite for any nonzero value.
    pub fn ln_abs(&self) -> f64 {
        self.mant.norm().ln() + self.exp2 as f64 * std::f64::consts::LN_2
    }

    pub fn log10_abs(&self) -> f64 {
        self.mant.norm().log10() + self.exp2 as f64 * std::f64::consts::LOG10_2
    }

    /// Principal logarithm as an ordinary complex number.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.ln_abs(), self.mant.arg())
    }

    /// `e^w` for arbitrary complex `w`; `Re w` may be far outside the `f64`
    /// exponent range.
    pub fn exp(w: Complex64) -> Self {
        if !w.re.is_finite() {
            return Self::normalize(w.exp(), 0);
        }
        let k = (w.re / std::f64::consts::LN_2).round();
        let r = (w.re - k * LN2_HI) - k * LN2_LO;
        let (s, c) = w.im.sin_cos();
        Self::normalize(Complex64::new(c, s) * r.exp(), k as i64)
    }

    pub fn scale(&self, x: f64) -> Self {
        Self::normalize(self.mant * x, self.exp2)
    }

    pub fn mul_complex(&self, z: Complex64) -> Self {
        Self::normalize(self.mant * z, self.exp2)
    }

    pub fn recip(&self) -> Self {
        Self::normalize(self.mant.inv(), -self.exp2)
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut base = *self;
        let mut acc = Self::ONE;
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Principal-branch power with a real exponent, `exp(p * Log x)`.
    pub fn powf(&self, p: f64) -> Self {
        if self.is_zero() {
            return if p == 0.0 { Self::ONE } else { Self::ZERO };
        }
        Self::exp(self.ln() * p)
    }

    /// `|self - other| / |other|`, computed without overflow.
    pub fn rel_diff(&self, other: &ScaledComplex) -> f64 {
        let d = *self - *other;
        if other.is_zero() {
            return if d.is_zero() { 0.0 } else { f64::INFINITY };
        }
        (d.abs() / other.abs()).to_complex().re
    }

    /// Relative size of the imaginary part, `|Im x| / |Re x|`.
    pub fn imag_ratio(&self) -> f64 {
        if self.mant.re == 0.0 {
            return if self.mant.im == 0.0 { 0.0 } else { f64::INFINITY };
        }
        (self.mant.im / self.mant.re).abs()
    }

    /// Table-style decimal rendering `0.dddde<exp>` of the real part with
    /// `digits` significant digits, round-half-even. When the imaginary part
    /// is not negligible both components are rendered as `(re, im)`.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.imag_ratio() <= 1e-12 {
            decimal_real(&self.re(), digits)
        } else if self.mant.re == 0.0 {
            format!("(0, {})", decimal_real(&self.im(), digits))
        } else {
            format!("({}, {})", decimal_real(&self.re(), digits), decimal_real(&self.im(), digits))
        }
    }

    /// Parse the real format produced by [`to_decimal_string`](Self::to_decimal_string).
    pub fn parse_decimal(s: &str) -> Option<ScaledComplex> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (mant_str, exp_str) = body.split_once(['e', 'E'])?;
        let exp10: i64 = exp_str.parse().ok()?;
        let (int_part, frac_part) = mant_str.split_once('.').unwrap_or((mant_str, ""));
        let digits = format!("{int_part}{frac_part}");
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let m: f64 = digits.parse().ok()?;
        let shift = exp10 - frac_part.len() as i64;
        let v = Self::from_f64(if neg { -m } else { m }) * pow10(shift);
        Some(v)
    }
}

/// `10^k` in scaled form.
pub fn pow10(k: i64) -> ScaledComplex {
    ScaledComplex::from_f64(10.0).powi(k)
}

fn decimal_real(x: &ScaledComplex, digits: usize) -> String {
    let digits = digits.max(1);
    let v = x.mant.re;
    if v == 0.0 {
        return format!("0.{}e0", "0".repeat(digits));
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sign = if v < 0.0 { "-" } else { "" };
    let a = x.abs();
    // decimal exponent E with 0.1 <= |x| / 10^E < 1
    let mut e10 = a.log10_abs().floor() as i64 + 1;
    let mut frac = (a / pow10(e10)).to_complex().re;
    if frac >= 1.0 {
        e10 += 1;
        frac /= 10.0;
    } else if frac < 0.1 {
        e10 -= 1;
        frac *= 10.0;
    }
    let scale = 10f64.powi(digits as i32);
    let mut m = (frac * scale).round_ties_even();
    if m >= scale {
        m /= 10.0;
        m = m.round_ties_even();
        e10 += 1;
    }
    format!("{sign}0.{:0width$}e{e10}", m as u64, width = digits)
}

impl fmt::Display for ScaledComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(f.precision().unwrap_or(16)))
    }
}

impl From<Complex64> for ScaledComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

impl From<f64> for ScaledComplex {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Mul for ScaledComplex {
    type Output = ScaledComplex;
    fn mul(self, rhs: Self) -> Self {
        Self::normalize(self.mant * rhs.mant, self.exp2 + rhs.exp2)
    }
}

impl Div for ScaledComplex {
    type Output = ScaledComplex;
    fn div(self, rhs: Self) -> Self {
        Self::normalize(self.mant / rhs.mant, self.exp2 - rhs.exp2)
    }
}

impl Add for ScaledComplex {
    type Output = ScaledComplex;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exp2 >= rhs.exp2 { (self, rhs) } else { (rhs, self) };
        let shift = small.exp2 - big.exp2;
        if shift < -60 {
            return big;
        }
        let m = big.mant + Complex64::new(ldexp(small.mant.re, shift), ldexp(small.mant.im, shift));
        Self::normalize(m, big.exp2)
    }
}

impl Sub for ScaledComplex {
    type Output = ScaledComplex;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ScaledComplex {
    type Output = ScaledComplex;
    fn neg(self) -> Self {
        ScaledComplex { mant: -self.mant, exp2: self.exp2 }
    }
}

impl std::iter::Sum for ScaledComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalize_examples() {
        let a = ScaledComplex::normalize(c(6.0, 0.0), 0);
        assert_eq!((a.mantissa(), a.exp2()), (c(1.5, 0.0), 2));
        let z = ScaledComplex::normalize(c(0.0, 0.0), 77);
        assert_eq!((z.mantissa(), z.exp2()), (c(0.0, 0.0), 0));
        let b = ScaledComplex::normalize(c(0.3, 0.4), 10);
        assert_eq!(b.exp2(), 8);
        assert_eq!(b.mantissa(), c(0.3 * 4.0, 0.4 * 4.0));
    }

    #[test]
    fn subnormal_mantissa_normalizes() {
        let tiny = f64::MIN_POSITIVE / 1024.0;
        let a = ScaledComplex::normalize(c(tiny, 0.0), 0);
        assert_eq!(a.mantissa().re, 1.0);
        assert_eq!(a.exp2(), -1022 - 10);
    }

    #[test]
    fn decimal_rendering() {
        let v = ScaledComplex::from_f64(0.5131) * pow10(130);
        assert_eq!(v.to_decimal_string(4), "0.5131e130");
        assert_eq!(ScaledComplex::ONE.to_decimal_string(4), "0.1000e1");
        let w = ScaledComplex::from_f64(0.4232) * pow10(34);
        assert_eq!(w.to_decimal_string(4), "0.4232e34");
        assert_eq!(ScaledComplex::from_f64(-0.012345).to_decimal_string(3), "-0.123e-1");
        // carry into the next decade
        assert_eq!(ScaledComplex::from_f64(0.99996).to_decimal_string(4), "0.1000e1");
        assert_eq!(ScaledComplex::ZERO.to_decimal_string(2), "0.00e0");
    }

    #[test]
    fn huge_exponential() {
        let e = ScaledComplex::exp(c(5000.0, 0.0));
        assert!((e.log10_abs() - 5000.0 / std::f64::consts::LN_10).abs() < 1e-10);
        let back = e * ScaledComplex::exp(c(-5000.0, 0.0));
        assert!(back.rel_diff(&ScaledComplex::ONE) < 1e-12);
    }

    #[test]
    fn add_far_apart_keeps_larger() {
        let big = ScaledComplex::from_f64(1.0) * pow10(300) * pow10(300);
        let s = big + ScaledComplex::ONE;
        assert_eq!(s, big);
    }

    fn scaled() -> impl Strategy<Value = ScaledComplex> {
        (-2.0f64..2.0, -2.0f64..2.0, -3000i64..3000).prop_map(|(re, im, e)| ScaledComplex::normalize(c(re, im), e))
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(re in -1e300f64..1e300, im in -1e300f64..1e300, e in -100_000i64..100_000) {
            let a = ScaledComplex::normalize(c(re, im), e);
            let b = ScaledComplex::normalize(a.mantissa(), a.exp2());
            prop_assert_eq!(a, b);
            if !a.is_zero() {
                let m = a.mantissa().re.abs().max(a.mantissa().im.abs());
                prop_assert!((1.0..2.0).contains(&m));
            }
        }

        #[test]
        fn decimal_round_trip(x in scaled()) {
            let x = x.re();
            prop_assume!(!x.is_zero());
            let s = x.to_decimal_string(6);
            let y = ScaledComplex::parse_decimal(&s).unwrap();
            // one unit in the sixth printed digit
            prop_assert!(y.rel_diff(&x) <= 1e-5, "{} vs {}", s, x);
        }

        #[test]
        fn mul_div_inverse(a in scaled(), b in scaled()) {
            prop_assume!(!b.is_zero() && !a.is_zero());
            prop_assert!(((a * b) / b).rel_diff(&a) < 1e-15);
        }
    }
}
