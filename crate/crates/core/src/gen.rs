//! Test-certificate generation by Chebyshev interpolation.
//!
//! This is an unverified oracle: the polynomial and its error estimate only
//! have to be good enough for the checker to certify them.

use num_traits::{Signed, Zero};

use crate::approx::{eval_expr_ref, Expr};
use crate::cert::Certificate;
use crate::error::Result;
use crate::numerics::{ceil_sig_digits, int, max_of, pow2, round_to_bits, Interval, Rational};
use crate::poly::{Poly, ScaledPoly};

/// Series depth used for reference evaluations while generating.
pub const REF_DEPTH: u32 = 80;
/// Significant bits kept in generated coefficients and sample values.
const COEFF_BITS: u32 = 96;
pub const DEFAULT_SAMPLES: usize = 1000;

/// Chebyshev nodes of the first kind mapped to `on`, rounded to dyadics.
fn chebyshev_nodes(on: &Interval, count: usize) -> Vec<Rational> {
    let mid = on.midpoint();
    let half = on.width() / int(2);
    (0..count)
        .map(|k| {
            let theta = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * count) as f64;
            let c = Rational::from_float(theta.cos()).unwrap_or_else(Rational::zero);
            round_to_bits(&(&mid + &half * c), 64)
        })
        .collect()
}

/// Newton divided differences, expanded to monomial form.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = Poly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        acc = &(&acc * &Poly::new(vec![-xs[i].clone(), int(1)])) + &Poly::constant(coef[i].clone());
    }
    acc
}

/// Evenly spaced points `lo + k (hi - lo) / (count - 1)`.
pub fn sample_points(on: &Interval, count: usize) -> Vec<Rational> {
    if count <= 1 {
        return vec![on.midpoint()];
    }
    let step = on.width() / int(count as i64 - 1);
    (0..count).map(|k| on.lo() + &step * int(k as i64)).collect()
}

/// Largest distance from `p(x)` to the far end of the reference enclosure
/// of `f(x)` over the given points.
pub fn sampled_error(e: &Expr, p: &Poly, points: &[Rational], depth: u32) -> Result<Rational> {
    let ps = ScaledPoly::from_poly(p);
    let mut worst = Rational::zero();
    for x in points {
        let enc = eval_expr_ref(e, x, depth)?;
        let px = ps.eval(x);
        let d = max_of(&(enc.lo() - &px).abs(), &(enc.hi() - &px).abs()).clone();
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

/// Degree-`deg` interpolant of `e` at Chebyshev nodes on `on`, with its
/// error estimated over `samples` evenly spaced points (an estimate, not a
/// bound).
pub fn cheby_approx(e: &Expr, on: &Interval, deg: usize, samples: usize) -> Result<(Poly, Rational)> {
    let xs = chebyshev_nodes(on, deg + 1);
    let ys = xs
        .iter()
        .map(|x| eval_expr_ref(e, x, REF_DEPTH).map(|enc| round_to_bits(&enc.midpoint(), COEFF_BITS)))
        .collect::<Result<Vec<_>>>()?;
    let exact = interpolate(&xs, &ys);
    let p = Poly::new(exact.coeffs().iter().map(|c| round_to_bits(c, COEFF_BITS)).collect());
    let err = sampled_error(e, &p, &sample_points(on, samples.max(2)), REF_DEPTH)?;
    Ok((p, err))
}

/// `max(6 deg, 32)` series terms.
pub fn default_taylor_terms(deg: usize) -> u32 {
    (6 * deg as u32).max(32)
}

/// Smallest eps handed out when the interpolant is exact.
fn eps_floor() -> Rational {
    pow2(-60)
}

/// Builds a certificate with `eps = 2 * estimated error`, rounded up to
/// three significant digits.
pub fn generate_certificate(e: &Expr, var: &str, on: &Interval, deg: usize, samples: usize) -> Result<Certificate> {
    let (p, err) = cheby_approx(e, on, deg, samples)?;
    let eps = if err.is_positive() {
        ceil_sig_digits(&(err * int(2)), 3)
    } else {
        eps_floor()
    };
    Ok(Certificate {
        var: var.to_string(),
        f: e.clone(),
        p,
        eps,
        interval: on.clone(),
        n: default_taylor_terms(deg),
    })
}
