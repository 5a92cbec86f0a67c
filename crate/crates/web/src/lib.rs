//! Browser bindings for the certificate checker. Every entry point takes
//! plain strings and returns a JSON string, so the page needs no glue beyond
//! `JSON.parse`.

use polycert::cert::{emit_report, parse_certificate, parse_expr, parse_zero_hints};
use polycert::gen::{generate_certificate, sample_points};
use polycert::numerics::{parse_rational, pow2, to_f64, Interval, Rational};
use polycert::validate::{isolate_roots, CheckOptions, DEFAULT_MAX_DEPTH};
use polycert::{check_certificate, count_zeros, eval_expr_ref, Error, Poly};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_PLOT_POINTS: u32 = 2000;
const GEN_SAMPLES: usize = 400;

fn error_json(e: &Error) -> Value {
    json!({ "error": e.to_string(), "code": e.code().as_str() })
}

fn bad_request(msg: &str) -> Value {
    json!({ "error": msg, "code": "invalid_request" })
}

pub fn generate_json(expr: &str, lo: &str, hi: &str, deg: u32) -> Value {
    let run = || -> Result<Value, Value> {
        let (e, var) = parse_expr(expr).map_err(|e| error_json(&e))?;
        let lo = parse_rational(lo).map_err(|e| error_json(&e))?;
        let hi = parse_rational(hi).map_err(|e| error_json(&e))?;
        if lo >= hi {
            return Err(bad_request("lower bound must be below upper bound"));
        }
        if !(1..=12).contains(&deg) {
            return Err(bad_request("degree must be between 1 and 12"));
        }
        let on = Interval::new(lo, hi);
        let cert = generate_certificate(&e, var.as_deref().unwrap_or("x"), &on, deg as usize, GEN_SAMPLES)
            .map_err(|e| error_json(&e))?;
        Ok(json!({ "certificate": cert.to_string(), "eps": to_f64(&cert.eps) }))
    };
    run().unwrap_or_else(|e| e)
}

/// Checks a certificate and samples `f - p` for plotting. `zeros` may be
/// empty (the built-in root oracle is used) or hold `u v` hint lines.
pub fn check_json(cert_text: &str, zeros: &str, samples: u32) -> Value {
    let cert = match parse_certificate(cert_text) {
        Ok(c) => c,
        Err(e) => return error_json(&e),
    };
    let hints = if zeros.trim().is_empty() {
        None
    } else {
        match parse_zero_hints(zeros) {
            Ok(h) => Some(h),
            Err(e) => return error_json(&e),
        }
    };
    let report = check_certificate(&cert, hints.as_deref(), &CheckOptions::default());
    let report: Value = serde_json::from_str(&emit_report(&report)).expect("report JSON is valid");

    let depth = (2 * cert.n + 16).min(96);
    let mut xs = Vec::new();
    let mut errs = Vec::new();
    for x in sample_points(&cert.interval, samples.clamp(2, MAX_PLOT_POINTS) as usize) {
        // a sample can fail only where the checker already refused
        if let Ok(enc) = eval_expr_ref(&cert.f, &x, depth) {
            xs.push(to_f64(&x));
            errs.push(to_f64(&(enc.midpoint() - cert.p.eval(&x))));
        }
    }
    json!({
        "report": report,
        "eps": to_f64(&cert.eps),
        "interval": [to_f64(cert.interval.lo()), to_f64(cert.interval.hi())],
        "plot": { "x": xs, "err": errs },
    })
}

/// Counts and isolates the real roots of `poly` (coefficient list, lowest
/// degree first) in the open interval `(lo, hi)`.
pub fn count_roots_json(poly: &str, lo: &str, hi: &str) -> Value {
    let run = || -> Result<Value, Value> {
        let p: Poly = poly.parse().map_err(|e: Error| error_json(&e))?;
        let a = parse_rational(lo).map_err(|e| error_json(&e))?;
        let b = parse_rational(hi).map_err(|e| error_json(&e))?;
        if a >= b {
            return Err(bad_request("lower bound must be below upper bound"));
        }
        let count = count_zeros(&p, &a, &b).map_err(|e| error_json(&e))?;
        let width: Rational = (&b - &a) * pow2(-20);
        let roots = if p.is_constant() {
            Vec::new()
        } else {
            isolate_roots(&p, &a, &b, count, &width, DEFAULT_MAX_DEPTH).map_err(|e| error_json(&e))?
        };
        let intervals: Vec<Value> = roots
            .iter()
            .map(|z| json!({ "u": z.u.to_string(), "v": z.v.to_string(), "approx": to_f64(&((&z.u + &z.v) / Rational::from_integer(2.into()))) }))
            .collect();
        Ok(json!({ "count": count, "roots": intervals }))
    };
    run().unwrap_or_else(|e| e)
}

#[wasm_bindgen]
pub fn generate(expr: &str, lo: &str, hi: &str, deg: u32) -> String {
    generate_json(expr, lo, hi, deg).to_string()
}

#[wasm_bindgen]
pub fn check(cert: &str, zeros: &str, samples: u32) -> String {
    check_json(cert, zeros, samples).to_string()
}

#[wasm_bindgen]
pub fn count_roots(poly: &str, lo: &str, hi: &str) -> String {
    count_roots_json(poly, lo, hi).to_string()
}
