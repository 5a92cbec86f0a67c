//! Sturm chains and exact root counting.
//!
//! The chain is `s0 = p`, `s1 = p'`, `s(i+1) = -rem(s(i-1), s(i))`, with
//! every entry from `s1` on replaced by its primitive integer part (a
//! positive rational multiple). Positive scaling does not change any sign,
//! so the variation counts are exactly those of the textbook chain.
//!
//! Remainders are computed by integer pseudo-division with the multiplier
//! `|lc|^k`, which keeps the chain in `Z[x]` and keeps signs intact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::Rational;
use crate::poly::{Poly, ScaledPoly};

#[derive(Debug, Clone)]
pub struct SturmChain {
    polys: Vec<Poly>,
    signs: Vec<ScaledPoly>,
}

/// Primitive part with positive content: `p / content(p)` for integer `p`.
fn primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    let content = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !content.is_zero() && !content.is_one() {
        for c in p.iter_mut() {
            *c /= &content;
        }
    }
    p
}

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Positive multiple of `p` with coprime integer coefficients.
fn integer_primitive(p: &Poly) -> Vec<BigInt> {
    primitive(ScaledPoly::from_poly(p).numerators().to_vec())
}

/// `|lc(b)|^k * a - Q * b` with degree below `deg b`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = b[db].clone();
    let (lc_abs, lc_neg) = (lc.abs(), lc.is_negative());
    let mut r = a.to_vec();
    while r.len() > db {
        let top = r.len() - 1;
        let lead = r[top].clone();
        let shift = top - db;
        for c in r.iter_mut() {
            *c *= &lc_abs;
        }
        // subtract lead * sign(lc) * x^shift * b, which kills the top term
        for (j, bj) in b.iter().enumerate() {
            let t = &lead * bj;
            if lc_neg {
                r[shift + j] += t;
            } else {
                r[shift + j] -= t;
            }
        }
        debug_assert!(r[top].is_zero());
        trim(&mut r);
    }
    r
}

impl SturmChain {
    pub fn new(p: &Poly) -> Result<SturmChain> {
        let deg = p.degree().filter(|&d| d >= 1).ok_or(Error::DegreeTooSmall)?;
        let mut ints = vec![integer_primitive(p), integer_primitive(&p.derivative())];
        let mut fuel = deg - 1;
        while ints.last().unwrap().len() > 1 {
            if fuel == 0 {
                unreachable!("Sturm chain fuel exhausted with a non-constant tail");
            }
            fuel -= 1;
            let n = ints.len();
            let mut next = pseudo_rem(&ints[n - 2], &ints[n - 1]);
            if next.is_empty() {
                return Err(Error::NotSquarefree);
            }
            for c in next.iter_mut() {
                *c = -&*c;
            }
            ints.push(primitive(next));
        }
        let mut polys = vec![p.clone()];
        polys.extend(ints[1..].iter().map(|c| {
            Poly::new(c.iter().map(|v| Rational::from_integer(v.clone())).collect())
        }));
        let signs = ints.into_iter().map(ScaledPoly::from_ints).collect();
        Ok(SturmChain { polys, signs })
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Sign of the chain's first entry (the input polynomial) at `x`.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        self.signs[0].sign_at(x)
    }

    /// Number of sign changes along the chain at `x`, zeros deleted.
    pub fn variation(&self, x: &Rational) -> usize {
        count_changes(self.signs.iter().map(|s| s.sign_at(x)))
    }

    /// Distinct roots in the open interval `(a, b)` for any `a < b`,
    /// including when `a` or `b` is itself a root.
    pub(crate) fn roots_between(&self, a: &Rational, b: &Rational) -> usize {
        let left = self.variation(a);
        let right = self.variation(b) + usize::from(self.sign_at(b) == 0);
        left - right
    }
}

fn count_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut prev = 0i8;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            changes += 1;
        }
        prev = s;
    }
    changes
}

pub fn sturm_chain(p: &Poly) -> Result<SturmChain> {
    SturmChain::new(p)
}

/// Sign variations of an arbitrary list of polynomials at `x`.
pub fn variation_of(polys: &[Poly], x: &Rational) -> usize {
    count_changes(polys.iter().map(|p| {
        let v = p.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }))
}

pub fn variation(chain: &SturmChain, x: &Rational) -> usize {
    chain.variation(x)
}

/// Number of distinct real roots of `p` in `(a, b)`. Requires `a < b` and
/// `p(a), p(b) != 0`. A nonzero constant has no roots.
pub fn count_zeros(p: &Poly, a: &Rational, b: &Rational) -> Result<usize> {
    assert!(a < b, "count_zeros needs a < b");
    for end in [a, b] {
        if p.eval(end).is_zero() {
            return Err(Error::EndpointZero { at: end.clone() });
        }
    }
    if p.is_constant() {
        return Ok(0);
    }
    let chain = SturmChain::new(p)?;
    Ok(chain.variation(a) - chain.variation(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    /// Textbook chain with rational long division, no scaling.
    fn naive_chain(p: &Poly) -> Vec<Poly> {
        let mut out = vec![p.clone(), p.derivative()];
        while out.last().unwrap().degree().unwrap_or(0) > 0 {
            let n = out.len();
            let r = -out[n - 2].rem(&out[n - 1]).unwrap();
            if r.is_zero() {
                break;
            }
            out.push(r);
        }
        out
    }

    fn same_up_to_positive_scale(a: &Poly, b: &Poly) -> bool {
        let (Some(la), Some(lb)) = (a.leading(), b.leading()) else {
            return a.is_zero() && b.is_zero();
        };
        let k = la / lb;
        k.is_positive() && &b.scale(&k) == a
    }

    #[test]
    fn chain_examples() {
        let c = sturm_chain(&p(&[-1, 0, 1])).unwrap();
        let expected = [p(&[-1, 0, 1]), p(&[0, 2]), p(&[1])];
        assert_eq!(c.len(), 3);
        for (a, b) in c.polys().iter().zip(&expected) {
            assert!(same_up_to_positive_scale(a, b), "{a} vs {b}");
        }

        let c = sturm_chain(&p(&[0, -1, 0, 1])).unwrap();
        let expected = [p(&[0, -1, 0, 1]), p(&[-1, 0, 3]), p(&[0, 1]), p(&[1])];
        assert_eq!(c.len(), 4);
        for (a, b) in c.polys().iter().zip(&expected) {
            assert!(same_up_to_positive_scale(a, b), "{a} vs {b}");
        }
    }

    #[test]
    fn chain_errors() {
        assert_eq!(sturm_chain(&p(&[1, -2, 1])).unwrap_err(), Error::NotSquarefree);
        assert_eq!(sturm_chain(&p(&[5])).unwrap_err(), Error::DegreeTooSmall);
        assert_eq!(sturm_chain(&Poly::zero()).unwrap_err(), Error::DegreeTooSmall);
    }

    #[test]
    fn variation_examples() {
        let c = sturm_chain(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(variation(&c, &int(-2)), 2);
        assert_eq!(variation(&c, &int(2)), 0);
        let hand = [p(&[1, 0, 1]), p(&[0, 2]), p(&[-1])];
        assert_eq!(variation_of(&hand, &int(0)), 1);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_zeros(&p(&[-1, 0, 1]), &int(-2), &int(2)).unwrap(), 2);
        assert_eq!(count_zeros(&p(&[1, 0, 1]), &int(-2), &int(2)).unwrap(), 0);
        assert_eq!(count_zeros(&p(&[0, -1, 0, 1]), &int(-2), &int(2)).unwrap(), 3);
        assert_eq!(
            count_zeros(&p(&[-1, 0, 1]), &int(1), &int(2)).unwrap_err(),
            Error::EndpointZero { at: int(1) }
        );
        assert_eq!(
            count_zeros(&p(&[1, -2, 1]), &int(-2), &int(2)).unwrap_err(),
            Error::NotSquarefree
        );
        assert_eq!(count_zeros(&p(&[3]), &int(0), &int(1)).unwrap(), 0);
    }

    #[test]
    fn roots_between_handles_root_endpoints() {
        let c = sturm_chain(&p(&[0, -1, 0, 1])).unwrap();
        assert_eq!(c.roots_between(&int(-1), &int(1)), 1);
        assert_eq!(c.roots_between(&int(0), &int(2)), 1);
        assert_eq!(c.roots_between(&int(-2), &int(0)), 1);
        assert_eq!(c.roots_between(&rat(-1, 2), &rat(1, 2)), 1);
        assert_eq!(c.roots_between(&int(-1), &int(0)), 0);
    }

    fn arb_distinct_roots() -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::btree_set((-200i64..=200, 1i64..=4), 1..=6).prop_map(|s| {
            let mut v: Vec<Rational> = s.into_iter().map(|(n, d)| rat(n, d)).collect();
            v.sort();
            v.dedup();
            v
        })
    }

    fn from_roots(roots: &[Rational]) -> Poly {
        roots
            .iter()
            .fold(p(&[1]), |acc, r| &acc * &Poly::new(vec![-r.clone(), int(1)]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_naive_chain(roots in arb_distinct_roots(), extra in 0i64..3) {
            let mut q = from_roots(&roots);
            if extra > 0 {
                q = &q * &p(&[extra, 0, 1]);
            }
            prop_assume!(q.degree().unwrap() >= 1);
            let chain = sturm_chain(&q).unwrap();
            let naive = naive_chain(&q);
            prop_assert_eq!(chain.len(), naive.len());
            for (a, b) in chain.polys().iter().zip(&naive) {
                prop_assert!(same_up_to_positive_scale(a, b));
            }
            // shape and fuel
            let degs: Vec<usize> = chain.polys().iter().map(|s| s.degree().unwrap()).collect();
            prop_assert!(degs.windows(2).all(|w| w[1] < w[0]));
            prop_assert_eq!(*degs.last().unwrap(), 0);
            prop_assert!(chain.len() <= q.degree().unwrap() + 1);
        }

        #[test]
        fn scaling_is_neutral(roots in arb_distinct_roots(), x in (-300i64..=300, 1i64..=7)) {
            let q = from_roots(&roots);
            prop_assume!(q.degree().unwrap() >= 1);
            let x = rat(x.0, x.1);
            let chain = sturm_chain(&q).unwrap();
            prop_assert_eq!(chain.variation(&x), variation_of(&naive_chain(&q), &x));
        }
    }
}
