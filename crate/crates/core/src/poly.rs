//! Dense univariate polynomials over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{parse_rational, sign_of, Rational};

/// Coefficient `i` multiplies `x^i`. The zero polynomial has no
/// coefficients; otherwise the leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Neg,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Horner evaluation in exact arithmetic.
    pub fn eval(&self, x: &Rational) -> Rational {
        if x.is_integer() || self.coeffs.len() < 8 {
            let mut acc = Rational::zero();
            for c in self.coeffs.iter().rev() {
                acc = acc * x + c;
            }
            return acc;
        }
        ScaledPoly::from_poly(self).eval(x)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Long division: `self = divisor * quot + rem` with `deg rem < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dlead = divisor.leading().ok_or(Error::DivisionByZeroPoly)?;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / dlead;
            if !q.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * d;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// `self(inner(x))`, accumulated Horner-style over `self`'s coefficients.
    pub fn compose(&self, inner: &Poly) -> Poly {
        if inner.is_constant() {
            return Poly::constant(self.eval(&inner.coeff(0)));
        }
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// `sum |c_i| m^i`, which dominates `|p(x)|` for every `|x| <= m`.
    pub fn abs_coeff_bound(&self, m: &Rational) -> Rational {
        debug_assert!(!m.is_negative());
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * m + c.abs();
        }
        acc
    }

    pub fn apply(op: PolyOp, p: &Poly, q: &Poly) -> Poly {
        match op {
            PolyOp::Add => p + q,
            PolyOp::Sub => p - q,
            PolyOp::Mul => p * q,
            PolyOp::Neg => -p,
        }
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o += s;
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// `[c0, c1, ...]` with `,` or `;` separators, ascending powers.
    fn from_str(s: &str) -> Result<Poly> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse {
                line: 1,
                col: 1,
                expected: "polynomial in square brackets".into(),
            })?;
        if body.trim().is_empty() {
            return Ok(Poly::zero());
        }
        body.split([',', ';'])
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map(Poly::new)
    }
}

/// A polynomial as integer numerators over one common positive denominator,
/// for evaluating the same polynomial at many points without per-step
/// rational normalisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledPoly {
    nums: Vec<BigInt>,
    den: BigInt,
}

impl ScaledPoly {
    pub fn from_poly(p: &Poly) -> Self {
        let den = p
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = p
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        ScaledPoly { nums, den }
    }

    /// Integer polynomial with the given coefficients (denominator one).
    pub fn from_ints(nums: Vec<BigInt>) -> Self {
        ScaledPoly {
            nums,
            den: BigInt::one(),
        }
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.nums
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// `sum nums_i a^i b^(k-i)` for `x = a/b`, i.e. `b^k * den * p(x)`.
    fn homogeneous(&self, x: &Rational) -> BigInt {
        let (a, b) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for (i, c) in self.nums.iter().rev().enumerate() {
            if i == 0 {
                acc = c.clone();
            } else {
                bpow *= b;
                acc = acc * a + c * &bpow;
            }
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let (num, den) = self.eval_parts(x);
        Rational::new(num, den)
    }

    /// `p(x)` as an unreduced fraction `(num, den)` with `den > 0`.
    pub fn eval_parts(&self, x: &Rational) -> (BigInt, BigInt) {
        if self.nums.is_empty() {
            return (BigInt::zero(), BigInt::one());
        }
        let k = self.nums.len() - 1;
        let den = &self.den * num_traits::pow(x.denom().clone(), k);
        (self.homogeneous(x), den)
    }

    /// Sign of `p(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        if self.nums.is_empty() {
            return 0;
        }
        sign_of(&self.homogeneous(x))
    }
}
