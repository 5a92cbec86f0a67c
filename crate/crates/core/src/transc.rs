//! Truncated Taylor series and their sound error bounds for the supported
//! elementary functions.
//!
//! Expansion point is 0 for `exp`, `sin`, `cos` and `atan`. `ln` is expanded
//! around 1 as `ln(1 + y)` and returned already shifted back to `x`.
//!
//! Remainder bounds:
//!
//! | function  | bound on `\|f(x) - t_n(x)\|` over `I`, `m = max(\|lo\|, \|hi\|)` |
//! |-----------|---------------------------------------------------------|
//! | sin, cos  | `m^(n+1) / (n+1)!`                                      |
//! | exp       | `3^ceil(hi) * hi^(n+1) / (n+1)!`                        |
//! | atan      | `m^(n+1) / (n+1)` (alternating tail, needs `m < 1`)     |
//! | ln        | `(hi-1)^(n+1) / (n+1)` (alternating tail, `I ⊂ (1, 2)`) |

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::{int, rat, Interval, Rational};
use crate::poly::{Poly, ScaledPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElemFn {
    Exp,
    Sin,
    Cos,
    Ln,
    Atan,
}

impl ElemFn {
    pub const ALL: [ElemFn; 5] = [ElemFn::Exp, ElemFn::Sin, ElemFn::Cos, ElemFn::Ln, ElemFn::Atan];

    pub fn name(self) -> &'static str {
        match self {
            ElemFn::Exp => "exp",
            ElemFn::Sin => "sin",
            ElemFn::Cos => "cos",
            ElemFn::Ln => "ln",
            ElemFn::Atan => "atan",
        }
    }

    /// Monotone increasing on its precondition domain.
    pub fn is_monotone(self) -> bool {
        matches!(self, ElemFn::Exp | ElemFn::Ln | ElemFn::Atan)
    }
}

impl fmt::Display for ElemFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElemFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<ElemFn> {
        ElemFn::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

/// A truncated series together with its remainder bound on `valid_on`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorApprox {
    pub series: Poly,
    pub rem_bound: Rational,
    pub valid_on: Interval,
}

impl TaylorApprox {
    pub fn new(func: ElemFn, n: u32, on: &Interval) -> Result<Self> {
        Ok(TaylorApprox {
            series: taylor_poly(func, n),
            rem_bound: taylor_rem_bound(func, n, on)?,
            valid_on: on.clone(),
        })
    }
}

pub fn check_precond(func: ElemFn, on: &Interval) -> Result<()> {
    let violation = |reason: &str| {
        Err(Error::PrecondViolation {
            func,
            range: on.clone(),
            reason: reason.to_string(),
        })
    };
    match func {
        ElemFn::Exp if on.lo().is_negative() => violation("exp series needs a non-negative argument"),
        ElemFn::Ln if !(on.lo() > &int(1) && on.hi() < &int(2)) => {
            violation("ln series needs its argument strictly inside (1, 2)")
        }
        ElemFn::Atan if !(on.lo() > &int(-1) && on.hi() < &int(1)) => {
            violation("atan series needs its argument strictly inside (-1, 1)")
        }
        _ => Ok(()),
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Truncated series `sum_{i<=n} f^(i)(c)/i! (x-c)^i` as a polynomial in `x`.
pub fn taylor_poly(func: ElemFn, n: u32) -> Poly {
    let n = n as usize;
    let mut coeffs = vec![Rational::zero(); n + 1];
    match func {
        ElemFn::Exp => {
            let mut fact = BigInt::one();
            for (i, c) in coeffs.iter_mut().enumerate() {
                if i > 0 {
                    fact *= i;
                }
                *c = Rational::new(BigInt::one(), fact.clone());
            }
        }
        ElemFn::Sin | ElemFn::Cos => {
            let parity = if func == ElemFn::Sin { 1 } else { 0 };
            let mut fact = BigInt::one();
            for (i, c) in coeffs.iter_mut().enumerate() {
                if i > 0 {
                    fact *= i;
                }
                if i % 2 == parity {
                    let sign = if (i / 2) % 2 == 0 { 1 } else { -1 };
                    *c = Rational::new(BigInt::from(sign), fact.clone());
                }
            }
        }
        ElemFn::Atan => {
            for (i, c) in coeffs.iter_mut().enumerate() {
                if i % 2 == 1 {
                    let sign = if (i / 2) % 2 == 0 { 1 } else { -1 };
                    *c = rat(sign, i as i64);
                }
            }
        }
        ElemFn::Ln => {
            for (i, c) in coeffs.iter_mut().enumerate().skip(1) {
                let sign = if i % 2 == 1 { 1 } else { -1 };
                *c = rat(sign, i as i64);
            }
            return Poly::new(coeffs).compose(&Poly::from_ints(&[-1, 1]));
        }
    }
    Poly::new(coeffs)
}

type SeriesCache = Mutex<HashMap<(ElemFn, u32), Arc<ScaledPoly>>>;

/// Memoised [`ScaledPoly`] form of [`taylor_poly`] for repeated point
/// evaluation.
pub fn taylor_scaled(func: ElemFn, n: u32) -> Arc<ScaledPoly> {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&(func, n)) {
        return hit.clone();
    }
    let built = Arc::new(ScaledPoly::from_poly(&taylor_poly(func, n)));
    cache.lock().unwrap().insert((func, n), built.clone());
    built
}

/// Sound bound on `|f(x) - taylor_poly(f, n)(x)|` for all `x` in `on`.
pub fn taylor_rem_bound(func: ElemFn, n: u32, on: &Interval) -> Result<Rational> {
    let (num, den) = taylor_rem_parts(func, n, on)?;
    Ok(Rational::new(num, den))
}

/// [`taylor_rem_bound`] as an unreduced fraction `(num, den)`, `den > 0`.
pub fn taylor_rem_parts(func: ElemFn, n: u32, on: &Interval) -> Result<(BigInt, BigInt)> {
    check_precond(func, on)?;
    let k = n as usize + 1;
    let base = match func {
        ElemFn::Sin | ElemFn::Cos | ElemFn::Atan => on.mag(),
        ElemFn::Exp => on.hi().clone(),
        ElemFn::Ln => on.hi() - int(1),
    };
    let mut num = num_traits::pow(base.numer().clone(), k);
    let mut den = num_traits::pow(base.denom().clone(), k);
    match func {
        ElemFn::Sin | ElemFn::Cos => den *= factorial(n + 1),
        ElemFn::Exp => {
            let e_major = on.hi().ceil().to_integer().to_usize().unwrap_or(usize::MAX);
            num *= num_traits::pow(BigInt::from(3), e_major);
            den *= factorial(n + 1);
        }
        ElemFn::Atan | ElemFn::Ln => den *= BigInt::from(k),
    }
    Ok((num, den))
}

/// Leibniz partial sum `4 * sum_{i<2k} (-1)^i / (2i+1)` with `2k` the
/// smallest even count `>= terms`. Ends on a negative term, so it is a
/// strict lower bound on pi.
pub fn pi_lower_bound(terms: u32) -> Rational {
    let count = terms.max(1).div_ceil(2) * 2;
    let mut sum = Rational::zero();
    for i in 0..count as i64 {
        let term = rat(1, 2 * i + 1);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum * int(4)
}

/// Enclosure of `f(on)`: `[-1, 1]` for sin/cos, otherwise the series at the
/// endpoints widened by the remainder bound.
pub fn fn_range_bound(func: ElemFn, on: &Interval, n: u32) -> Result<Interval> {
    check_precond(func, on)?;
    if !func.is_monotone() {
        return Ok(Interval::new(int(-1), int(1)));
    }
    let t = taylor_scaled(func, n);
    let delta = taylor_rem_bound(func, n, on)?;
    Ok(Interval::new(t.eval(on.lo()) - &delta, t.eval(on.hi()) + delta))
}

/// Upper bound on `|f'|` over `on`.
pub fn lipschitz_bound(func: ElemFn, on: &Interval, n: u32) -> Result<Rational> {
    check_precond(func, on)?;
    Ok(match func {
        ElemFn::Sin | ElemFn::Cos | ElemFn::Atan => int(1),
        ElemFn::Exp => fn_range_bound(func, on, n)?.hi().clone(),
        ElemFn::Ln => on.lo().recip(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat_from_decimal;

    fn iv(lo: Rational, hi: Rational) -> Interval {
        Interval::new(lo, hi)
    }

    #[test]
    fn preconditions() {
        assert!(check_precond(ElemFn::Exp, &iv(int(0), rat(1, 2))).is_ok());
        assert!(matches!(
            check_precond(ElemFn::Ln, &iv(rat(1, 2), rat(3, 2))),
            Err(Error::PrecondViolation { func: ElemFn::Ln, .. })
        ));
        assert!(check_precond(ElemFn::Sin, &iv(int(-100), int(100))).is_ok());
        assert!(check_precond(ElemFn::Cos, &iv(int(-100), int(100))).is_ok());
        assert!(check_precond(ElemFn::Exp, &iv(rat(-1, 100), int(1))).is_err());
        assert!(check_precond(ElemFn::Ln, &iv(rat(11, 10), int(2))).is_err());
        assert!(check_precond(ElemFn::Ln, &iv(int(1), rat(3, 2))).is_err());
        assert!(check_precond(ElemFn::Atan, &iv(rat(-9, 10), rat(9, 10))).is_ok());
        assert!(check_precond(ElemFn::Atan, &iv(int(0), int(1))).is_err());
    }

    #[test]
    fn tan_is_not_supported() {
        assert_eq!("tan".parse::<ElemFn>(), Err(Error::UnknownFunction("tan".into())));
        assert_eq!("atan".parse::<ElemFn>(), Ok(ElemFn::Atan));
    }

    #[test]
    fn series_coefficients() {
        assert_eq!(
            taylor_poly(ElemFn::Exp, 3),
            Poly::new(vec![int(1), int(1), rat(1, 2), rat(1, 6)])
        );
        assert_eq!(
            taylor_poly(ElemFn::Sin, 5),
            Poly::new(vec![int(0), int(1), int(0), rat(-1, 6), int(0), rat(1, 120)])
        );
        assert_eq!(
            taylor_poly(ElemFn::Cos, 4),
            Poly::new(vec![int(1), int(0), rat(-1, 2), int(0), rat(1, 24)])
        );
        assert_eq!(
            taylor_poly(ElemFn::Atan, 5),
            Poly::new(vec![int(0), int(1), int(0), rat(-1, 3), int(0), rat(1, 5)])
        );
    }

    #[test]
    fn ln_series_is_shifted() {
        // (x-1) - (x-1)^2/2 expanded by composition
        let y = Poly::from_ints(&[-1, 1]);
        let series_in_y = Poly::new(vec![int(0), int(1), rat(-1, 2)]);
        let expected = series_in_y.compose(&y);
        assert_eq!(expected, Poly::new(vec![rat(-3, 2), int(2), rat(-1, 2)]));
        assert_eq!(taylor_poly(ElemFn::Ln, 2), expected);
    }

    #[test]
    fn remainder_examples() {
        assert_eq!(taylor_rem_bound(ElemFn::Exp, 3, &iv(int(0), int(1))).unwrap(), rat(1, 8));
        // max |e^x - t_3(x)| on [0,1] is e - 8/3 ~ 0.0516
        let t3 = taylor_poly(ElemFn::Exp, 3);
        assert!(rat(2718281, 1000000) - t3.eval(&int(1)) < rat(1, 8));

        let two_pi = rat(314159265359, 50000000000);
        let d = taylor_rem_bound(ElemFn::Cos, 32, &iv(int(0), two_pi)).unwrap();
        assert!(d <= rat_from_decimal("3.77e-3").unwrap());
        assert!(taylor_rem_bound(ElemFn::Sin, 5, &iv(int(0), int(0))).unwrap().is_zero());

        assert_eq!(taylor_rem_bound(ElemFn::Atan, 4, &iv(int(0), rat(1, 2))).unwrap(), rat(1, 160));
        assert_eq!(
            taylor_rem_bound(ElemFn::Ln, 3, &iv(rat(11, 10), rat(3, 2))).unwrap(),
            rat(1, 64)
        );
        assert!(taylor_rem_bound(ElemFn::Ln, 3, &iv(rat(1, 2), rat(3, 2))).is_err());
    }

    #[test]
    fn pi_bounds() {
        assert_eq!(pi_lower_bound(4), rat(304, 105));
        assert_eq!(pi_lower_bound(2), rat(8, 3));
        assert_eq!(pi_lower_bound(3), pi_lower_bound(4));
        assert_eq!(pi_lower_bound(1), rat(8, 3));
        let pi_upper = rat_from_decimal("3.14159266").unwrap();
        let mut prev = Rational::zero();
        for k in (2..200).step_by(2) {
            let r = pi_lower_bound(k);
            assert!(r < pi_upper);
            assert!(r < rat(355, 113));
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn range_examples() {
        assert_eq!(
            fn_range_bound(ElemFn::Sin, &iv(int(0), int(100)), 7).unwrap(),
            iv(int(-1), int(1))
        );
        assert_eq!(
            fn_range_bound(ElemFn::Exp, &iv(int(0), int(1)), 3).unwrap(),
            iv(rat(7, 8), rat(67, 24))
        );
        assert_eq!(
            fn_range_bound(ElemFn::Atan, &iv(int(0), int(0)), 9).unwrap(),
            iv(int(0), int(0))
        );
        assert!(fn_range_bound(ElemFn::Ln, &iv(int(0), int(1)), 3).is_err());
    }

    #[test]
    fn lipschitz_examples() {
        assert_eq!(lipschitz_bound(ElemFn::Sin, &iv(int(-50), int(50)), 3).unwrap(), int(1));
        assert_eq!(lipschitz_bound(ElemFn::Ln, &iv(rat(11, 10), rat(3, 2)), 8).unwrap(), rat(10, 11));
        assert_eq!(lipschitz_bound(ElemFn::Exp, &iv(int(0), int(1)), 3).unwrap(), rat(67, 24));
    }

    #[test]
    fn remainder_non_increasing_in_n() {
        let cases = [
            (ElemFn::Sin, iv(rat(-9, 10), rat(1, 2))),
            (ElemFn::Cos, iv(int(0), rat(9, 10))),
            (ElemFn::Atan, iv(rat(-1, 3), rat(9, 10))),
            (ElemFn::Ln, iv(rat(101, 100), rat(19, 10))),
        ];
        for (f, on) in cases {
            let mut prev = None;
            for n in 1..40 {
                let d = taylor_rem_bound(f, n, &on).unwrap();
                if let Some(p) = prev {
                    assert!(d <= p, "{f} n={n}");
                }
                prev = Some(d);
            }
        }
    }

    #[test]
    fn scaled_cache_agrees() {
        let t = taylor_poly(ElemFn::Cos, 12);
        let s = taylor_scaled(ElemFn::Cos, 12);
        assert_eq!(s.eval(&rat(3, 7)), t.eval(&rat(3, 7)));
        assert!(Arc::ptr_eq(&s, &taylor_scaled(ElemFn::Cos, 12)));
    }
}
