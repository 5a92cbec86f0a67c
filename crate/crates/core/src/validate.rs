//! Phase 2: bound the error polynomial `h = q - p` on `[a, b]` and compare
//! the bound with the residual `gamma = eps - delta`.
//!
//! 1. count the zeros of `h'` in `(a, b)` with a Sturm chain;
//! 2. obtain one confidence interval per zero (from the built-in bisection
//!    oracle or from user hints) and validate it by a sign change of `h'`;
//! 3. bound `|h|` by `max(|h(a)|, |h(b)|, K + B e)`, where `B` bounds `|h'|`,
//!    `K` is the largest `|h(u)|` over the interval anchors and `e` the widest
//!    interval.

use num_traits::{Signed, Zero};

use crate::approx::{approx_as_poly_with, DEFAULT_PI_TERMS};
use crate::cert::Certificate;
use crate::error::{Error, ReasonCode, Result};
use crate::numerics::{int, max_of, pow2, to_sci, Rational};
use crate::poly::{Poly, ScaledPoly};
use crate::sturm::{count_zeros, SturmChain};

pub const DEFAULT_MAX_DEPTH: u32 = 128;

/// A closed interval `[u, v]` claimed to contain a root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConfInterval {
    pub u: Rational,
    pub v: Rational,
}

impl ConfInterval {
    pub fn new(u: Rational, v: Rational) -> Self {
        assert!(u <= v, "confidence interval out of order");
        ConfInterval { u, v }
    }

    pub fn width(&self) -> Rational {
        &self.v - &self.u
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.u <= x && x <= &self.v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalBound {
    /// `B`: bound on `|h'|` over `[a, b]`.
    pub deriv_bound: Rational,
    /// `K`: largest `|h(u)|` over the confidence intervals.
    pub anchor_bound: Rational,
    /// `e`: widest confidence interval.
    pub max_width: Rational,
    pub bound: Rational,
}

impl ExtremalBound {
    fn zero() -> Self {
        ExtremalBound {
            deriv_bound: Rational::zero(),
            anchor_bound: Rational::zero(),
            max_width: Rational::zero(),
            bound: Rational::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub max_depth: u32,
    pub pi_terms: u32,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_depth: DEFAULT_MAX_DEPTH,
            pi_terms: DEFAULT_PI_TERMS,
        }
    }
}

/// Bisection root isolation for a squarefree `p` with `p(a), p(b) != 0`.
///
/// Returns `nz` disjoint intervals inside `[a, b]`, each holding exactly one
/// root and of width at most `width_goal`; a midpoint that hits a root
/// exactly is returned as `[m, m]`.
pub fn isolate_roots(
    p: &Poly,
    a: &Rational,
    b: &Rational,
    nz: usize,
    width_goal: &Rational,
    max_depth: u32,
) -> Result<Vec<ConfInterval>> {
    if nz == 0 {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(p)?;
    let total = chain.roots_between(a, b);
    if total != nz {
        return Err(Error::ZeroValidationFailed {
            index: None,
            reason: format!("oracle asked for {nz} roots but the Sturm count is {total}"),
        });
    }
    let two = int(2);
    let mut found = Vec::with_capacity(nz);
    let mut work = vec![(a.clone(), b.clone(), nz, 0u32)];
    while let Some((mut lo, mut hi, count, mut depth)) = work.pop() {
        if count == 0 {
            continue;
        }
        let (slo, shi) = (chain.sign_at(&lo), chain.sign_at(&hi));
        if count == 1 && slo != 0 && shi != 0 {
            // Single simple root with a sign change: plain bisection on p.
            loop {
                if &hi - &lo <= *width_goal {
                    found.push(ConfInterval::new(lo, hi));
                    break;
                }
                if depth >= max_depth {
                    return Err(Error::OracleDepthExceeded { depth: max_depth });
                }
                depth += 1;
                let mid = (&lo + &hi) / &two;
                match chain.sign_at(&mid) {
                    0 => {
                        found.push(ConfInterval::new(mid.clone(), mid));
                        break;
                    }
                    s if s == slo => lo = mid,
                    _ => hi = mid,
                }
            }
            continue;
        }
        if depth >= max_depth {
            return Err(Error::OracleDepthExceeded { depth: max_depth });
        }
        let mid = (&lo + &hi) / &two;
        let left = chain.roots_between(&lo, &mid);
        let mid_root = chain.sign_at(&mid) == 0;
        if mid_root {
            found.push(ConfInterval::new(mid.clone(), mid.clone()));
        }
        let right = count - left - usize::from(mid_root);
        work.push((mid.clone(), hi, right, depth + 1));
        work.push((lo, mid, left, depth + 1));
    }
    found.sort_by(|x, y| x.u.cmp(&y.u));
    Ok(found)
}

/// Accepts `zs` iff it has exactly `nz` pairwise-disjoint intervals inside
/// `[a, b]`, each with `dp(u) * dp(v) <= 0`.
pub fn validate_zeros(dp: &Poly, zs: &[ConfInterval], nz: usize, a: &Rational, b: &Rational) -> Result<()> {
    let fail = |index: Option<usize>, reason: String| Err(Error::ZeroValidationFailed { index, reason });
    if zs.len() != nz {
        return fail(None, format!("expected {nz} confidence intervals, got {}", zs.len()));
    }
    let dps = ScaledPoly::from_poly(dp);
    for (i, z) in zs.iter().enumerate() {
        if z.u > z.v {
            return fail(Some(i), "lower bound exceeds upper bound".into());
        }
        if &z.u < a || &z.v > b {
            return fail(Some(i), format!("[{}, {}] is not inside [{a}, {b}]", z.u, z.v));
        }
        if dps.sign_at(&z.u) * dps.sign_at(&z.v) > 0 {
            return fail(Some(i), format!("no sign change of h' on [{}, {}]", z.u, z.v));
        }
    }
    let mut order: Vec<usize> = (0..zs.len()).collect();
    order.sort_by(|&i, &j| zs[i].u.cmp(&zs[j].u));
    for w in order.windows(2) {
        if zs[w[0]].v >= zs[w[1]].u {
            return fail(Some(w[1]), format!("overlaps interval #{}", w[0]));
        }
    }
    Ok(())
}

/// `max(|h(a)|, |h(b)|, K + B e)`; only the endpoint terms when `zs` is empty.
pub fn extremal_bound(h: &Poly, dh: &Poly, zs: &[ConfInterval], a: &Rational, b: &Rational) -> ExtremalBound {
    let hs = ScaledPoly::from_poly(h);
    let m = max_of(&a.abs(), &b.abs()).clone();
    let deriv_bound = dh.abs_coeff_bound(&m);
    let anchor_bound = zs
        .iter()
        .map(|z| hs.eval(&z.u).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    let max_width = zs.iter().map(ConfInterval::width).max().unwrap_or_else(Rational::zero);
    let ends = max_of(&hs.eval(a).abs(), &hs.eval(b).abs()).clone();
    let bound = if zs.is_empty() {
        ends
    } else {
        let interior = &anchor_bound + &deriv_bound * &max_width;
        max_of(&ends, &interior).clone()
    };
    ExtremalBound {
        deriv_bound,
        anchor_bound,
        max_width,
        bound,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrPolyCheck {
    pub certified: bool,
    pub extremal: ExtremalBound,
    pub num_zeros: usize,
    pub zeros: Vec<ConfInterval>,
}

/// Oracle width target: small enough that `B e` stays below `gamma / 4`.
pub fn oracle_width_goal(dh: &Poly, a: &Rational, b: &Rational, gamma: &Rational, nz: usize) -> Rational {
    let coarse = (b - a) * pow2(-20);
    let m = max_of(&a.abs(), &b.abs()).clone();
    let b0 = dh.abs_coeff_bound(&m);
    let fine = gamma / (int(4) * (b0 + int(1)) * int(nz.max(1) as i64));
    let w = max_of(&Rational::zero(), &fine).clone().min(coarse.clone());
    if w.is_zero() {
        coarse
    } else {
        w
    }
}

/// Decides whether `|h(x)| <= gamma` on `[a, b]`.
pub fn check_err_poly(
    h: &Poly,
    a: &Rational,
    b: &Rational,
    gamma: &Rational,
    hints: Option<&[ConfInterval]>,
    opts: &CheckOptions,
) -> Result<ErrPolyCheck> {
    assert!(a < b);
    if h.is_zero() {
        return Ok(ErrPolyCheck {
            certified: !gamma.is_negative(),
            extremal: ExtremalBound::zero(),
            num_zeros: 0,
            zeros: Vec::new(),
        });
    }
    let dh = h.derivative();
    if dh.is_zero() {
        let bound = h.eval(a).abs();
        return Ok(ErrPolyCheck {
            certified: &bound <= gamma,
            extremal: ExtremalBound {
                bound,
                ..ExtremalBound::zero()
            },
            num_zeros: 0,
            zeros: Vec::new(),
        });
    }
    let nz = count_zeros(&dh, a, b)?;
    let zeros = match hints {
        Some(z) => z.to_vec(),
        None => {
            let w = oracle_width_goal(&dh, a, b, gamma, nz);
            isolate_roots(&dh, a, b, nz, &w, opts.max_depth)?
        }
    };
    validate_zeros(&dh, &zeros, nz, a, b)?;
    let extremal = extremal_bound(h, &dh, &zeros, a, b);
    Ok(ErrPolyCheck {
        certified: &extremal.bound <= gamma,
        extremal,
        num_zeros: nz,
        zeros,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    NotCertified { reason: ReasonCode, message: String },
    Error { reason: ReasonCode, message: String },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::NotCertified { .. } => "not_certified",
            Verdict::Error { .. } => "error",
        }
    }

    pub fn reason(&self) -> Option<ReasonCode> {
        match self {
            Verdict::Certified => None,
            Verdict::NotCertified { reason, .. } | Verdict::Error { reason, .. } => Some(*reason),
        }
    }

    pub fn message(&self) -> Option<&str> {
        match self {
            Verdict::Certified => None,
            Verdict::NotCertified { message, .. } | Verdict::Error { message, .. } => Some(message),
        }
    }

    fn from_error(e: &Error) -> Verdict {
        Verdict::Error {
            reason: e.code(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Timings {
    pub phase1_ms: f64,
    pub phase2_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// Phase-1 error `delta`.
    pub delta1: Option<Rational>,
    /// Residual `eps - delta`.
    pub gamma: Option<Rational>,
    pub num_zeros: Option<usize>,
    pub zeros: Vec<ConfInterval>,
    pub extremal: Option<ExtremalBound>,
    pub timings: Timings,
}

impl CheckReport {
    fn empty(verdict: Verdict) -> Self {
        CheckReport {
            verdict,
            delta1: None,
            gamma: None,
            num_zeros: None,
            zeros: Vec::new(),
            extremal: None,
            timings: Timings::default(),
        }
    }
}

struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed_ms(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_secs_f64() * 1e3
        }
        #[cfg(target_arch = "wasm32")]
        {
            0.0
        }
    }
}

/// Runs both phases on `cert`. Never reports `Certified` on an error path.
pub fn check_certificate(cert: &Certificate, hints: Option<&[ConfInterval]>, opts: &CheckOptions) -> CheckReport {
    let total = Stopwatch::start();
    let phase1 = Stopwatch::start();
    let approx = approx_as_poly_with(&cert.f, &cert.interval, cert.n, opts.pi_terms);
    let phase1_ms = phase1.elapsed_ms();
    let approx = match approx {
        Ok(r) => r,
        Err(e) => {
            let mut report = CheckReport::empty(Verdict::from_error(&e));
            report.timings = Timings {
                phase1_ms,
                phase2_ms: 0.0,
                total_ms: total.elapsed_ms(),
            };
            return report;
        }
    };
    let gamma = &cert.eps - &approx.delta;
    let mut report = CheckReport::empty(Verdict::Certified);
    report.delta1 = Some(approx.delta.clone());
    report.gamma = Some(gamma.clone());
    if gamma.is_negative() {
        report.verdict = Verdict::NotCertified {
            reason: ReasonCode::ResidualNegative,
            message: format!(
                "phase-1 error {} exceeds eps {}; raise n or narrow the interval",
                to_sci(&approx.delta, 6),
                to_sci(&cert.eps, 6)
            ),
        };
        report.timings = Timings {
            phase1_ms,
            phase2_ms: 0.0,
            total_ms: total.elapsed_ms(),
        };
        return report;
    }
    let phase2 = Stopwatch::start();
    let h = &approx.poly - &cert.p;
    let outcome = check_err_poly(&h, cert.interval.lo(), cert.interval.hi(), &gamma, hints, opts);
    let phase2_ms = phase2.elapsed_ms();
    match outcome {
        Ok(check) => {
            if !check.certified {
                report.verdict = Verdict::NotCertified {
                    reason: ReasonCode::BoundExceedsGamma,
                    message: format!(
                        "error polynomial bound {} exceeds residual {}",
                        to_sci(&check.extremal.bound, 6),
                        to_sci(&gamma, 6)
                    ),
                };
            }
            report.num_zeros = Some(check.num_zeros);
            report.zeros = check.zeros;
            report.extremal = Some(check.extremal);
        }
        Err(e) => report.verdict = Verdict::from_error(&e),
    }
    report.timings = Timings {
        phase1_ms,
        phase2_ms,
        total_ms: total.elapsed_ms(),
    };
    report
}
