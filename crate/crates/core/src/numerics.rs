//! Exact rational scalars and closed-interval arithmetic.
//!
//! Every quantity the checker touches is a [`Rational`]; nothing on the
//! checking path goes through binary floating point. Literals are ingested
//! exactly by [`parse_rational`] and printed back as `num/den`.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational; always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Decimal exponents beyond this magnitude are rejected rather than expanded.
const MAX_DECIMAL_EXPONENT: i64 = 4096;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn pow2(exp: i64) -> Rational {
    let p = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn pow10(exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(10u32), exp as usize)
}

pub fn is_canonical(r: &Rational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

pub fn max_of<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min_of<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

fn strip_sign(text: &str) -> (bool, &str) {
    if let Some(rest) = text.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = text.strip_prefix('\u{2212}') {
        (true, rest)
    } else if let Some(rest) = text.strip_prefix('+') {
        (false, rest)
    } else {
        (false, text)
    }
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Exact value of a decimal literal: optional sign, digits, optional
/// fraction part, optional exponent (`-3.77e-3` is `-377/100000`).
pub fn rat_from_decimal(text: &str) -> Result<Rational> {
    let malformed = || Error::MalformedNumber(text.to_string());
    let (negative, body) = strip_sign(text.trim());
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let (sign_neg, digits) = strip_sign(&body[pos + 1..]);
            if !all_digits(digits) {
                return Err(malformed());
            }
            let e: i64 = digits.parse().map_err(|_| malformed())?;
            if e > MAX_DECIMAL_EXPONENT {
                return Err(malformed());
            }
            (&body[..pos], if sign_neg { -e } else { e })
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if !(int_part.is_empty() || all_digits(int_part)) || !(frac_part.is_empty() || all_digits(frac_part))
    {
        return Err(malformed());
    }
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| malformed())?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    let value = if scale >= 0 {
        Rational::from_integer(num * pow10(scale as u64))
    } else {
        Rational::new(num, pow10(scale.unsigned_abs()))
    };
    Ok(value)
}

/// Parses a rational in any accepted form: integer, `num/den`, or decimal.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let (negative, n) = strip_sign(n.trim());
        let d = d.trim();
        if !all_digits(n) || !all_digits(d) {
            return Err(Error::MalformedNumber(text.to_string()));
        }
        let n: BigInt = n.parse().map_err(|_| Error::MalformedNumber(text.to_string()))?;
        let d: BigInt = d.parse().map_err(|_| Error::MalformedNumber(text.to_string()))?;
        if d.is_zero() {
            return Err(Error::MalformedNumber(text.to_string()));
        }
        let r = Rational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    rat_from_decimal(t)
}

/// `num/den`, or a plain integer when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Terminating decimal expansion of `r`, if one exists.
pub fn to_exact_decimal(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let (mut twos, mut fives) = (0u64, 0u64);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(pow10(places));
    debug_assert!(scaled.is_integer());
    let digits = scaled.to_integer().abs().to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    if places == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let places = places as usize;
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (i, f) = padded.split_at(padded.len() - places);
    Some(format!("{sign}{i}.{f}"))
}

/// Decimal approximation with `sig` significant digits (round half away
/// from zero), formatted as `d.ddd…e<exp>`. Computed exactly.
pub fn to_sci(r: &Rational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    // Find e with 10^e <= a < 10^(e+1).
    let mut e = (a.numer().bits() as i64 - a.denom().bits() as i64) * 30103 / 100000;
    let ten_pow = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(pow10(k as u64))
        } else {
            Rational::new(BigInt::one(), pow10(k.unsigned_abs()))
        }
    };
    while ten_pow(e) > a {
        e -= 1;
    }
    while ten_pow(e + 1) <= a {
        e += 1;
    }
    let scaled = &a * ten_pow(sig as i64 - 1 - e);
    let mut digits = (scaled + rat(1, 2)).floor().to_integer();
    if digits >= pow10(sig as u64) {
        digits /= BigInt::from(10);
        e += 1;
    }
    let d = digits.to_string();
    let (head, tail) = d.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Smallest rational with at most `sig` significant decimal digits that is
/// `>= r` (for `r > 0`).
pub fn ceil_sig_digits(r: &Rational, sig: u32) -> Rational {
    if !r.is_positive() {
        return r.clone();
    }
    let s = to_sci(r, sig as usize + 2);
    let e: i64 = s.rsplit_once('e').map(|(_, e)| e.parse().unwrap()).unwrap();
    let shift = sig as i64 - 1 - e;
    let unit = if shift >= 0 {
        Rational::new(BigInt::one(), pow10(shift as u64))
    } else {
        Rational::from_integer(pow10(shift.unsigned_abs()))
    };
    (r / &unit).ceil() * unit
}

/// `bits(numer) - bits(denom)`, within one of `log2 |r|`; 0 for zero.
pub fn bit_exponent(r: &Rational) -> i64 {
    if r.is_zero() {
        return 0;
    }
    r.numer().bits() as i64 - r.denom().bits() as i64
}

/// Shift `s` such that `num / den * 2^s` has about `bits` integer bits.
fn dyadic_shift(num: &BigInt, den: &BigInt, bits: u32) -> i64 {
    bits as i64 - (num.bits() as i64 - den.bits() as i64)
}

fn scaled_quotient(num: &BigInt, den: &BigInt, s: i64, ceil: bool) -> BigInt {
    let (n, d) = if s >= 0 {
        (num << s as usize, den.clone())
    } else {
        (num.clone(), den << s.unsigned_abs() as usize)
    };
    if ceil {
        -(-n).div_floor(&d)
    } else {
        n.div_floor(&d)
    }
}

/// `num / den` (with `den > 0`) rounded down to a dyadic of about `bits`
/// significant bits, together with a bound on the rounding error. Avoids
/// the gcd a reduced rational would need.
pub fn floor_dyadic(num: &BigInt, den: &BigInt, bits: u32) -> (Rational, Rational) {
    if num.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let s = dyadic_shift(num, den, bits);
    let q = scaled_quotient(num, den, s, false);
    let unit = pow2(-s);
    (Rational::from_integer(q) * &unit, unit)
}

/// Smallest dyadic of about `bits` significant bits that is `>= num / den`
/// (with `den > 0`).
pub fn ceil_dyadic(num: &BigInt, den: &BigInt, bits: u32) -> Rational {
    if num.is_zero() {
        return Rational::zero();
    }
    let s = dyadic_shift(num, den, bits);
    Rational::from_integer(scaled_quotient(num, den, s, true)) * pow2(-s)
}

/// Rounds to the nearest dyadic rational with `bits` significant bits.
pub fn round_to_bits(r: &Rational, bits: u32) -> Rational {
    if r.is_zero() {
        return r.clone();
    }
    let shift = bits as i64 - bit_exponent(r);
    let scale = pow2(shift);
    (r * &scale).round() / scale
}

pub fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IvOp {
    Add,
    Sub,
    Mul,
    Neg,
}

impl Interval {
    /// Panics when `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval bounds out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn try_new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    /// `max(|lo|, |hi|)`, the largest magnitude in the interval.
    pub fn mag(&self) -> Rational {
        max_of(&self.lo.abs(), &self.hi.abs()).clone()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `[lo - d, hi + d]` for `d >= 0`.
    pub fn widen(&self, d: &Rational) -> Interval {
        debug_assert!(!d.is_negative());
        Interval {
            lo: &self.lo - d,
            hi: &self.hi + d,
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

/// Interval extension of a ring operation; `Neg` ignores `b`.
pub fn iv_arith(op: IvOp, a: &Interval, b: &Interval) -> Interval {
    match op {
        IvOp::Add => a.add(b),
        IvOp::Sub => a.sub(b),
        IvOp::Mul => a.mul(b),
        IvOp::Neg => a.neg(),
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
