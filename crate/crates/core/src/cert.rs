//! Certificate text format, zero-hint files and JSON reports.
//!
//! ```text
//! # cosine over one period
//! f = cos(radiant);
//! p = [5476237/4194304, -5340353/4194304, 1699887/8388608, 3740489/1125899906842624];
//! eps = 1/2;
//! I = [0, 314159265359/50000000000];
//! n = 32;
//! ```
//!
//! Statements may appear in any order, each exactly once. Expressions use
//! `+ - *`, parentheses, unary minus, rational or decimal literals, a single
//! variable and the functions `exp sin cos ln atan`. There is no division:
//! write `x * 1/2`, where `1/2` is a literal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::approx::Expr;
use crate::error::{Error, ReasonCode, Result};
use crate::numerics::{format_rational, parse_rational, to_sci, Interval, Rational};
use crate::poly::Poly;
use crate::transc::ElemFn;
use crate::validate::{CheckReport, ConfInterval, ExtremalBound, Timings, Verdict};

const MAX_NESTING: usize = 256;

/// The claim `max_{x in interval} |f(x) - p(x)| <= eps`, checked with
/// Taylor series truncated at degree `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub var: String,
    pub f: Expr,
    pub p: Poly,
    pub eps: Rational,
    pub interval: Interval,
    pub n: u32,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "f = {};", self.f.display(&self.var))?;
        if self.p.is_zero() {
            writeln!(f, "p = [0];")?;
        } else {
            writeln!(f, "p = {};", self.p)?;
        }
        writeln!(f, "eps = {};", format_rational(&self.eps))?;
        writeln!(f, "I = [{}, {}];", self.interval.lo(), self.interval.hi())?;
        writeln!(f, "n = {};", self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Ident(i) => format!("identifier `{i}`"),
            Tok::Eof => "end of input".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eq => "`=`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let digit_at = |k: usize| chars.get(k).is_some_and(|c| c.is_ascii_digit());
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let single = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned {
                tok,
                line: start_line,
                col: start_col,
            });
            i += 1;
            col += 1;
            continue;
        }
        let begin = i;
        if c.is_ascii_digit() || (c == '.' && digit_at(i + 1)) {
            while digit_at(i) {
                i += 1;
            }
            let mut plain_integer = true;
            if chars.get(i) == Some(&'.') {
                plain_integer = false;
                i += 1;
                while digit_at(i) {
                    i += 1;
                }
            }
            if matches!(chars.get(i), Some('e' | 'E')) {
                let signed = matches!(chars.get(i + 1), Some('+' | '-'));
                let first = if signed { i + 2 } else { i + 1 };
                if digit_at(first) {
                    plain_integer = false;
                    i = first;
                    while digit_at(i) {
                        i += 1;
                    }
                }
            }
            if plain_integer && chars.get(i) == Some(&'/') && digit_at(i + 1) {
                i += 1;
                while digit_at(i) {
                    i += 1;
                }
            }
            out.push(Spanned {
                tok: Tok::Num(chars[begin..i].iter().collect()),
                line: start_line,
                col: start_col,
            });
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[begin..i].iter().collect()),
                line: start_line,
                col: start_col,
            });
        } else {
            return Err(Error::Parse {
                line,
                col,
                expected: format!("a token, found `{c}`"),
            });
        }
        col += i - begin;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    vars: Vec<String>,
    depth: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            vars: Vec::new(),
            depth: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Parse {
            line: s.line,
            col: s.col,
            expected: format!("{expected}, found {}", s.tok.describe()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&tok.describe())
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(text) => {
                let v = parse_rational(&text).or_else(|_| self.error("a rational literal"))?;
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ => self.error("a rational literal"),
        }
    }

    fn natural(&mut self) -> Result<u32> {
        match self.peek().clone() {
            Tok::Num(text) if text.bytes().all(|b| b.is_ascii_digit()) => match text.parse() {
                Ok(v) => {
                    self.bump();
                    Ok(v)
                }
                Err(_) => self.error("a natural number below 2^32"),
            },
            _ => self.error("a natural number"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.error("a less deeply nested expression");
        }
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.unary()?);
                }
                Tok::Slash => return self.error("an operator (division is unsupported; write `x * 1/2`)"),
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                self.depth += 1;
                if self.depth > MAX_NESTING {
                    return self.error("a less deeply nested expression");
                }
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(match inner {
                    Expr::Cst(c) => Expr::Cst(-c),
                    other => Expr::neg(other),
                })
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Num(text) => {
                let v = parse_rational(&text).or_else(|_| self.error("a rational literal"))?;
                self.bump();
                Ok(Expr::Cst(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    let func: ElemFn = name.parse()?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Expr::app(func, arg));
                }
                if name.parse::<ElemFn>().is_ok() {
                    return self.error("`(` after function name");
                }
                if !self.vars.contains(&name) {
                    self.vars.push(name);
                }
                if self.vars.len() > 1 {
                    return Err(Error::MultipleVariables(self.vars.clone()));
                }
                Ok(Expr::Var)
            }
            _ => self.error("an expression"),
        }
    }

    fn poly(&mut self) -> Result<Poly> {
        self.expect(Tok::LBracket)?;
        let mut coeffs = vec![self.rational()?];
        while matches!(self.peek(), Tok::Comma | Tok::Semi) {
            self.bump();
            coeffs.push(self.rational()?);
        }
        self.expect(Tok::RBracket)?;
        Ok(Poly::new(coeffs))
    }

    fn interval(&mut self) -> Result<(Rational, Rational)> {
        self.expect(Tok::LBracket)?;
        let lo = self.rational()?;
        self.expect(Tok::Comma)?;
        let hi = self.rational()?;
        self.expect(Tok::RBracket)?;
        Ok((lo, hi))
    }
}

/// Parses an expression on its own; returns it with its variable name, if any.
pub fn parse_expr(text: &str) -> Result<(Expr, Option<String>)> {
    let mut ps = Parser::new(text)?;
    let e = ps.expr()?;
    if *ps.peek() != Tok::Eof {
        return ps.error("end of expression");
    }
    Ok((e, ps.vars.into_iter().next()))
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let mut ps = Parser::new(text)?;
    let mut f = None;
    let mut p = None;
    let mut eps = None;
    let mut range = None;
    let mut n = None;
    fn set<T>(slot: &mut Option<T>, v: T, name: &str) -> Result<()> {
        if slot.is_some() {
            return Err(Error::InvalidCertificate(format!("field `{name}` given more than once")));
        }
        *slot = Some(v);
        Ok(())
    }
    while *ps.peek() != Tok::Eof {
        let key = match ps.peek().clone() {
            Tok::Ident(k) if matches!(k.as_str(), "f" | "p" | "eps" | "I" | "n") => k,
            _ => return ps.error("one of `f`, `p`, `eps`, `I`, `n`"),
        };
        ps.bump();
        ps.expect(Tok::Eq)?;
        match key.as_str() {
            "f" => {
                let e = ps.expr()?;
                set(&mut f, e, "f")?
            }
            "p" => {
                let v = ps.poly()?;
                set(&mut p, v, "p")?
            }
            "eps" => {
                let v = ps.rational()?;
                set(&mut eps, v, "eps")?
            }
            "I" => {
                let v = ps.interval()?;
                set(&mut range, v, "I")?
            }
            _ => {
                let v = ps.natural()?;
                set(&mut n, v, "n")?
            }
        }
        match ps.peek() {
            Tok::Semi => {
                ps.bump();
            }
            Tok::Eof => {}
            _ => return ps.error("`;`"),
        }
    }
    let missing = |name: &str| Error::InvalidCertificate(format!("missing field `{name}`"));
    let f = f.ok_or_else(|| missing("f"))?;
    let p = p.ok_or_else(|| missing("p"))?;
    let eps = eps.ok_or_else(|| missing("eps"))?;
    let (lo, hi) = range.ok_or_else(|| missing("I"))?;
    let n = n.ok_or_else(|| missing("n"))?;
    if eps <= Rational::from_integer(0.into()) {
        return Err(Error::InvalidCertificate("eps must be positive".into()));
    }
    if lo >= hi {
        return Err(Error::InvalidCertificate("interval needs lo < hi".into()));
    }
    if n == 0 {
        return Err(Error::InvalidCertificate("n must be at least 1".into()));
    }
    Ok(Certificate {
        var: ps.vars.into_iter().next().unwrap_or_else(|| "x".into()),
        f,
        p,
        eps,
        interval: Interval::new(lo, hi),
        n,
    })
}

/// One `u v` pair per line; `#` starts a comment.
pub fn parse_zero_hints(text: &str) -> Result<Vec<ConfInterval>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                col: 1,
                expected: "two whitespace-separated rationals `u v`".into(),
            });
        }
        let parse = |s: &str| {
            parse_rational(s).map_err(|_| Error::Parse {
                line,
                col: raw.find(s).map_or(1, |c| c + 1),
                expected: format!("a rational, found `{s}`"),
            })
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        if u > v {
            return Err(Error::InvertedInterval { line });
        }
        out.push(ConfInterval::new(u, v));
    }
    Ok(out)
}

pub fn format_zero_hints(zs: &[ConfInterval]) -> String {
    zs.iter().map(|z| format!("{} {}\n", z.u, z.v)).collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct ZeroJson {
    u: String,
    v: String,
    u_approx: String,
    v_approx: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct TimingsJson {
    phase1: f64,
    phase2: f64,
    total: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReportJson {
    verdict: String,
    reason: Option<String>,
    message: Option<String>,
    delta1: Option<String>,
    delta1_approx: Option<String>,
    gamma: Option<String>,
    gamma_approx: Option<String>,
    #[serde(rename = "numZeros")]
    num_zeros: Option<usize>,
    zeros: Vec<ZeroJson>,
    #[serde(rename = "B")]
    deriv_bound: Option<String>,
    #[serde(rename = "B_approx")]
    deriv_bound_approx: Option<String>,
    #[serde(rename = "K")]
    anchor_bound: Option<String>,
    #[serde(rename = "K_approx")]
    anchor_bound_approx: Option<String>,
    e: Option<String>,
    e_approx: Option<String>,
    bound: Option<String>,
    bound_approx: Option<String>,
    timings_ms: TimingsJson,
}

const APPROX_DIGITS: usize = 12;

fn exact(r: &Rational) -> String {
    format_rational(r)
}

fn approx(r: &Rational) -> String {
    to_sci(r, APPROX_DIGITS)
}

fn pair(r: Option<&Rational>) -> (Option<String>, Option<String>) {
    (r.map(exact), r.map(approx))
}

fn to_json(r: &CheckReport) -> ReportJson {
    let (delta1, delta1_approx) = pair(r.delta1.as_ref());
    let (gamma, gamma_approx) = pair(r.gamma.as_ref());
    let ex = r.extremal.as_ref();
    let (deriv_bound, deriv_bound_approx) = pair(ex.map(|x| &x.deriv_bound));
    let (anchor_bound, anchor_bound_approx) = pair(ex.map(|x| &x.anchor_bound));
    let (e, e_approx) = pair(ex.map(|x| &x.max_width));
    let (bound, bound_approx) = pair(ex.map(|x| &x.bound));
    ReportJson {
        verdict: r.verdict.label().into(),
        reason: r.verdict.reason().map(|c| c.as_str().into()),
        message: r.verdict.message().map(Into::into),
        delta1,
        delta1_approx,
        gamma,
        gamma_approx,
        num_zeros: r.num_zeros,
        zeros: r
            .zeros
            .iter()
            .map(|z| ZeroJson {
                u: exact(&z.u),
                v: exact(&z.v),
                u_approx: approx(&z.u),
                v_approx: approx(&z.v),
            })
            .collect(),
        deriv_bound,
        deriv_bound_approx,
        anchor_bound,
        anchor_bound_approx,
        e,
        e_approx,
        bound,
        bound_approx,
        timings_ms: TimingsJson {
            phase1: r.timings.phase1_ms,
            phase2: r.timings.phase2_ms,
            total: r.timings.total_ms,
        },
    }
}

/// Deterministic JSON rendering of a report (timings aside).
pub fn emit_report(r: &CheckReport) -> String {
    serde_json::to_string(&to_json(r)).expect("report serialisation cannot fail")
}

pub fn emit_report_pretty(r: &CheckReport) -> String {
    serde_json::to_string_pretty(&to_json(r)).expect("report serialisation cannot fail")
}

/// Inverse of [`emit_report`]; the `_approx` fields are ignored.
pub fn parse_report(text: &str) -> Result<CheckReport> {
    let j: ReportJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        expected: format!("a report object ({e})"),
    })?;
    let bad = |what: &str| Error::InvalidCertificate(format!("report field {what}"));
    let rat = |s: &Option<String>| -> Result<Option<Rational>> { s.as_deref().map(parse_rational).transpose() };
    let reason = j
        .reason
        .as_deref()
        .map(|s| ReasonCode::parse(s).ok_or_else(|| bad("reason")))
        .transpose()?;
    let message = j.message.clone().unwrap_or_default();
    let verdict = match (j.verdict.as_str(), reason) {
        ("certified", _) => Verdict::Certified,
        ("not_certified", Some(reason)) => Verdict::NotCertified { reason, message },
        ("error", Some(reason)) => Verdict::Error { reason, message },
        _ => return Err(bad("verdict")),
    };
    let extremal = match (rat(&j.deriv_bound)?, rat(&j.anchor_bound)?, rat(&j.e)?, rat(&j.bound)?) {
        (Some(deriv_bound), Some(anchor_bound), Some(max_width), Some(bound)) => Some(ExtremalBound {
            deriv_bound,
            anchor_bound,
            max_width,
            bound,
        }),
        (None, None, None, None) => None,
        _ => return Err(bad("B/K/e/bound")),
    };
    let zeros = j
        .zeros
        .iter()
        .map(|z| {
            let (u, v) = (parse_rational(&z.u)?, parse_rational(&z.v)?);
            if u > v {
                return Err(bad("zeros"));
            }
            Ok(ConfInterval::new(u, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport {
        verdict,
        delta1: rat(&j.delta1)?,
        gamma: rat(&j.gamma)?,
        num_zeros: j.num_zeros,
        zeros,
        extremal,
        timings: Timings {
            phase1_ms: j.timings_ms.phase1,
            phase2_ms: j.timings_ms.phase2,
            total_ms: j.timings_ms.total,
        },
    })
}
