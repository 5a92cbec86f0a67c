#![allow(dead_code)]

use std::time::Duration;

use num_traits::Signed;
use polycert::cert::{parse_certificate, parse_expr};
use polycert::gen::{generate_certificate, sample_points};
use polycert::numerics::{parse_rational, Interval, Rational};
use polycert::{eval_expr_ref, Certificate, CheckOptions, CheckReport, Poly};

pub const FIG1C_P: &str = "[5476237/4194304, -5340353/4194304, 1699887/8388608, 3740489/1125899906842624]";
pub const FIG1C_HI: &str = "314159265359/50000000000";

/// Depth of the reference evaluator used as a soundness oracle.
pub const ORACLE_DEPTH: u32 = 64;

pub fn r(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

pub fn gen(f: &str, lo: &str, hi: &str, deg: usize) -> Certificate {
    let (e, var) = parse_expr(f).unwrap();
    let on = Interval::new(r(lo), r(hi));
    generate_certificate(&e, var.as_deref().unwrap_or("x"), &on, deg, 1000).unwrap()
}

pub fn with_eps(c: &Certificate, eps: Rational) -> Certificate {
    Certificate { eps, ..c.clone() }
}

pub fn fig1c(eps: Rational) -> Certificate {
    let text = format!("f = cos(radiant); p = {FIG1C_P}; eps = {eps}; I = [0, {FIG1C_HI}]; n = 32;");
    parse_certificate(&text).unwrap()
}

/// Worst far-end distance `max |f(x) - p(x)|` over `count` evenly spaced
/// points, measured against the reference enclosure of `f`.
pub fn sampled_sup(c: &Certificate, count: usize) -> Rational {
    polycert::gen::sampled_error(&c.f, &c.p, &sample_points(&c.interval, count), ORACLE_DEPTH).unwrap()
}

/// Points where the enclosure of `f(x)` is not inside `[p(x) - eps, p(x) + eps]`.
pub fn violations(c: &Certificate, count: usize) -> Vec<Rational> {
    sample_points(&c.interval, count)
        .into_iter()
        .filter(|x| {
            let enc = eval_expr_ref(&c.f, x, ORACLE_DEPTH).unwrap();
            let px = c.p.eval(x);
            (enc.lo() - &px).abs() > c.eps || (enc.hi() - &px).abs() > c.eps
        })
        .collect()
}

/// (expression, lo, hi, degree) for the generated corpus. Every argument of
/// a transcendental function stays inside that function's domain, and no
/// function is applied to another: at n = 32 such nesting multiplies
/// degrees and is impractical to check.
pub const CORPUS: &[(&str, &str, &str, usize)] = &[
    ("exp(x)", "0", "1/2", 3),
    ("exp(x) - 1", "0.003", "0.01", 3),
    ("cos(x + 1)", "0", "2.14", 5),
    ("sin(x - 2)", "-1", "3", 5),
    ("sin(x)", "-1", "1", 5),
    ("sin(x)", "0", "3.14", 7),
    ("cos(x)", "0", "1", 4),
    ("cos(x)", "-3", "3", 8),
    ("exp(x)", "0", "2", 6),
    ("exp(x * x)", "0", "1/2", 4),
    ("exp(-x)", "-1", "0", 5),
    ("exp(x) - 1 - x", "0", "1/4", 4),
    ("atan(x)", "-1/2", "1/2", 5),
    ("atan(x)", "0", "0.6", 7),
    ("atan(x * 0.5)", "-1", "1", 5),
    ("ln(x)", "1.1", "1.5", 5),
    ("ln(x)", "1.01", "1.5", 4),
    ("ln(1 + x * x)", "0.2", "0.6", 6),
    ("sin(x) * cos(x)", "0", "1", 6),
    ("x * exp(x)", "0", "1", 5),
    ("sin(x * x)", "0", "1", 6),
    ("cos(0.5 * x + 0.25)", "-1", "1", 5),
    ("exp(x) + sin(x)", "0", "1", 6),
    ("atan(x) * 2", "-0.5", "0.5", 5),
    ("sin(x) + cos(x)", "-2", "2", 7),
    ("1 - cos(x)", "-0.5", "0.5", 4),
    ("x * x * x - 2 * x", "-2", "2", 3),
    ("sin(2 * x)", "0", "1.5", 8),
    ("exp(x) * cos(x)", "0", "1", 6),
    ("ln(x) * x", "1.05", "1.4", 5),
    ("cos(x - 1) * 0.5", "0", "2", 5),
    ("atan(x) - x", "-0.8", "0.8", 7),
];

pub fn corpus() -> Vec<Certificate> {
    CORPUS.iter().map(|&(f, lo, hi, d)| gen(f, lo, hi, d)).collect()
}

pub fn timed_check(c: &Certificate) -> (CheckReport, Duration) {
    let t = std::time::Instant::now();
    let rep = polycert::check_certificate(c, None, &CheckOptions::default());
    (rep, t.elapsed())
}

pub fn perturb_constant(c: &Certificate, by: &Rational) -> Certificate {
    let mut coeffs = c.p.coeffs().to_vec();
    if coeffs.is_empty() {
        coeffs.push(by.clone());
    } else {
        coeffs[0] += by;
    }
    Certificate { p: Poly::new(coeffs), ..c.clone() }
}
