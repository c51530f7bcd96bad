//! Polynomials in one variable with exact rational coefficients.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients are indexed by power, lowest first; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    /// From `(numerator, power)` integer pairs over a common denominator.
    pub fn from_integers(terms: &[(i64, usize)], den: i64) -> Self {
        let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut c = vec![BigRational::zero(); deg + 1];
        for &(n, p) in terms {
            c[p] += rat(n, den);
        }
        Self::new(c)
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> BigRational {
        self.coeffs.get(power).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn integral(&self) -> Self {
        let mut c = vec![BigRational::zero()];
        c.extend(self.coeffs.iter().enumerate().map(|(k, a)| a / BigRational::from_integer(BigInt::from(k + 1))));
        Self::new(c)
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &BigRational) -> Self {
        let lin = Self::new(vec![c.clone(), BigRational::one()]);
        let mut acc = Self::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(a.clone());
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a.to_f64().unwrap_or(f64::NAN))
    }

    /// Least common denominator of all coefficients.
    pub fn common_denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// Render as `(n0+n1*x+...)/d` with integer numerators in ascending
    /// powers, or a bare integer polynomial when `d = 1`.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let den = self.common_denominator();
        let mut num = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n: BigInt = (c * BigRational::from_integer(den.clone())).to_integer();
            let first = num.is_empty();
            if n.is_negative() {
                num.push('-');
            } else if !first {
                num.push('+');
            }
            let a = n.abs();
            match k {
                0 => write!(num, "{a}").unwrap(),
                _ => {
                    if !a.is_one() {
                        write!(num, "{a}*").unwrap();
                    }
                    num.push_str(var);
                    if k > 1 {
                        write!(num, "^{k}").unwrap();
                    }
                }
            }
        }
        if den.is_one() {
            num
        } else {
            format!("({num})/{den}")
        }
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RationalPoly::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering() {
        let p = RationalPoly::from_integers(&[(81, 2), (-462, 4), (385, 6)], 1152);
        assert_eq!(p.to_text("t"), "(81*t^2-462*t^4+385*t^6)/1152");
        let q = RationalPoly::from_integers(&[(-1, 0), (12, 2)], 24);
        assert_eq!(q.to_text("mu"), "(-1+12*mu^2)/24");
        assert_eq!(RationalPoly::one().to_text("t"), "1");
        assert_eq!(RationalPoly::from_integers(&[(3, 1), (-5, 3)], 24).to_text("t"), "(3*t-5*t^3)/24");
    }

    #[test]
    fn calculus_is_exact() {
        let p = RationalPoly::from_integers(&[(1, 0), (-5, 2)], 1);
        let i = p.integral();
        assert_eq!(i, RationalPoly::new(vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(-5, 3)]));
        assert_eq!(i.derivative(), p);
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = RationalPoly::from_integers(&[(2, 0), (-3, 1), (1, 3)], 7);
        let c = rat(1, 2);
        let s = p.shift(&c);
        for x in [rat(0, 1), rat(3, 4), rat(-5, 2)] {
            assert_eq!(s.eval_rational(&x), p.eval_rational(&(&x + &c)));
        }
    }
}
