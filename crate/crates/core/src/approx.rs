//! Phase 1: replace every elementary function in an expression by its
//! truncated Taylor series and propagate the accumulated error.
//!
//! The result is a polynomial `q` and a bound `delta` with
//! `|f(x) - q(x)| <= delta` for every `x` in the input interval.
//!
//! Error propagation, with `M_u = max |u|` taken from interval analysis:
//!
//! * `u ± v`: `d_u + d_v`
//! * `u * v`: `M_u d_v + M_v d_u + d_u d_v`
//! * `f(g)`:  `rem_f(J) + L_f(J) d_g`, where `J` is the range of `g` widened
//!   by `d_g` and `L_f` bounds `|f'|` on `J`. For sin/cos `d_g` must also stay
//!   below half a rational lower bound of pi.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{ceil_dyadic, floor_dyadic, int, Interval, Rational};
use crate::poly::Poly;
use crate::transc::{
    check_precond, fn_range_bound, lipschitz_bound, pi_lower_bound, taylor_poly, taylor_rem_bound, taylor_rem_parts,
    taylor_scaled, ElemFn,
};

/// Default number of Leibniz terms for the pi lower bound used by the
/// sin/cos guard (`304/105`).
pub const DEFAULT_PI_TERMS: u32 = 4;

/// Univariate expression. The variable is anonymous here; the certificate
/// carries its name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Cst(Rational),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    App(ElemFn, Box<Expr>),
}

impl Expr {
    pub fn cst(c: Rational) -> Expr {
        Expr::Cst(c)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn app(f: ElemFn, a: Expr) -> Expr {
        Expr::App(f, Box::new(a))
    }

    pub fn has_var(&self) -> bool {
        match self {
            Expr::Cst(_) => false,
            Expr::Var => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.has_var() || b.has_var(),
            Expr::Neg(a) | Expr::App(_, a) => a.has_var(),
        }
    }

    pub fn functions(&self) -> BTreeSet<ElemFn> {
        let mut out = BTreeSet::new();
        self.collect_functions(&mut out);
        out
    }

    fn collect_functions(&self, out: &mut BTreeSet<ElemFn>) {
        match self {
            Expr::Cst(_) | Expr::Var => {}
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_functions(out);
                b.collect_functions(out);
            }
            Expr::Neg(a) => a.collect_functions(out),
            Expr::App(f, a) => {
                out.insert(*f);
                a.collect_functions(out);
            }
        }
    }

    /// Renders the expression with `var` as the variable name, in the
    /// certificate grammar (round-trips through the parser).
    pub fn display<'a>(&'a self, var: &'a str) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, var }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            _ => 3,
        }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    var: &'a str,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self.expr, self.var, f)
    }
}

fn write_expr(e: &Expr, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let child = |c: &Expr, parens: bool, f: &mut fmt::Formatter<'_>| -> fmt::Result {
        if parens {
            f.write_str("(")?;
            write_expr(c, var, f)?;
            f.write_str(")")
        } else {
            write_expr(c, var, f)
        }
    };
    match e {
        Expr::Cst(c) if c.is_negative() => write!(f, "({c})"),
        Expr::Cst(c) => write!(f, "{c}"),
        Expr::Var => f.write_str(var),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            let op = match e {
                Expr::Add(..) => " + ",
                Expr::Sub(..) => " - ",
                _ => " * ",
            };
            let p = e.precedence();
            child(a, a.precedence() < p, f)?;
            f.write_str(op)?;
            child(b, b.precedence() <= p, f)
        }
        Expr::Neg(a) => {
            f.write_str("-")?;
            child(a, true, f)
        }
        Expr::App(func, a) => {
            write!(f, "{func}")?;
            child(a, true, f)
        }
    }
}

/// Output of phase 1: `|f(x) - poly(x)| <= delta` on the input interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub poly: Poly,
    pub delta: Rational,
}

/// Interval enclosure of `e` over `on`.
pub fn eval_expr_interval(e: &Expr, on: &Interval, n: u32) -> Result<Interval> {
    Ok(match e {
        Expr::Cst(c) => Interval::point(c.clone()),
        Expr::Var => on.clone(),
        Expr::Add(a, b) => eval_expr_interval(a, on, n)?.add(&eval_expr_interval(b, on, n)?),
        Expr::Sub(a, b) => eval_expr_interval(a, on, n)?.sub(&eval_expr_interval(b, on, n)?),
        Expr::Mul(a, b) => eval_expr_interval(a, on, n)?.mul(&eval_expr_interval(b, on, n)?),
        Expr::Neg(a) => eval_expr_interval(a, on, n)?.neg(),
        Expr::App(f, a) => fn_range_bound(*f, &eval_expr_interval(a, on, n)?, n)?,
    })
}

pub fn approx_as_poly(e: &Expr, on: &Interval, n: u32) -> Result<ApproxResult> {
    approx_as_poly_with(e, on, n, DEFAULT_PI_TERMS)
}

/// [`approx_as_poly`] with an explicit Leibniz term count for the pi guard.
pub fn approx_as_poly_with(e: &Expr, on: &Interval, n: u32, pi_terms: u32) -> Result<ApproxResult> {
    let ctx = Phase1 {
        on,
        n,
        var: Poly::x(),
        half_pi_lower: pi_lower_bound(pi_terms) / int(2),
        pointwise: false,
    };
    let (poly, delta) = ctx.run(e)?;
    Ok(ApproxResult { poly, delta })
}

/// Reference enclosure of `e(x)`: phase 1 on the point interval `[x, x]`
/// at series depth `depth`. The variable is substituted by the constant
/// `x`, so every intermediate polynomial is a constant.
pub fn eval_expr_ref(e: &Expr, x: &Rational, depth: u32) -> Result<Interval> {
    let on = Interval::point(x.clone());
    let ctx = Phase1 {
        on: &on,
        n: depth,
        var: Poly::constant(x.clone()),
        half_pi_lower: pi_lower_bound(DEFAULT_PI_TERMS) / int(2),
        pointwise: true,
    };
    let (poly, delta) = ctx.run(e)?;
    let c = poly.coeff(0);
    Ok(Interval::new(&c - &delta, c + delta))
}

struct Phase1<'a> {
    on: &'a Interval,
    n: u32,
    var: Poly,
    half_pi_lower: Rational,
    pointwise: bool,
}

impl Phase1<'_> {
    /// Range of the subexpression `e` whose approximation is `(q, d)`. At a
    /// single point the enclosure `[q - d, q + d]` is itself a sound range;
    /// it also contains `q`, as the Lipschitz step requires.
    fn range(&self, e: &Expr, q: &Poly, d: &Rational) -> Result<Interval> {
        if self.pointwise {
            let c = q.coeff(0);
            Ok(Interval::new(&c - d, c + d))
        } else {
            eval_expr_interval(e, self.on, self.n)
        }
    }

    fn run(&self, e: &Expr) -> Result<(Poly, Rational)> {
        Ok(match e {
            Expr::Cst(c) => (Poly::constant(c.clone()), Rational::zero()),
            Expr::Var => (self.var.clone(), Rational::zero()),
            Expr::Neg(a) => {
                let (q, d) = self.run(a)?;
                (-q, d)
            }
            Expr::Add(a, b) => {
                let ((qa, da), (qb, db)) = (self.run(a)?, self.run(b)?);
                (&qa + &qb, da + db)
            }
            Expr::Sub(a, b) => {
                let ((qa, da), (qb, db)) = (self.run(a)?, self.run(b)?);
                (&qa - &qb, da + db)
            }
            Expr::Mul(a, b) => {
                let ((qa, da), (qb, db)) = (self.run(a)?, self.run(b)?);
                let ma = self.range(a, &qa, &da)?.mag();
                let mb = self.range(b, &qb, &db)?.mag();
                let delta = &ma * &db + &mb * &da + &da * &db;
                (&qa * &qb, delta)
            }
            Expr::App(f, a) => {
                let (qa, da) = self.run(a)?;
                let range = if self.pointwise {
                    self.range(a, &qa, &da)?
                } else {
                    eval_expr_interval(a, self.on, self.n)?.widen(&da)
                };
                check_precond(*f, &range)?;
                if matches!(f, ElemFn::Sin | ElemFn::Cos) && da > self.half_pi_lower {
                    return Err(Error::SinCosErrorTooLarge {
                        func: *f,
                        error: da,
                        limit: self.half_pi_lower.clone(),
                    });
                }
                let lip = if da.is_zero() {
                    Rational::zero()
                } else {
                    lipschitz_bound(*f, &range, self.n)?
                };
                if self.pointwise {
                    // Dyadic centre and outward-rounded radius; exact
                    // reduced rationals would cost a large gcd per step.
                    let bits = (4 * self.n).max(128);
                    let (num, den) = taylor_scaled(*f, self.n).eval_parts(&qa.coeff(0));
                    let (c, round_err) = floor_dyadic(&num, &den, bits);
                    let (rn, rd) = taylor_rem_parts(*f, self.n, &range)?;
                    let delta = ceil_dyadic(&rn, &rd, bits) + round_err + lip * da;
                    (Poly::constant(c), delta)
                } else {
                    let rem = taylor_rem_bound(*f, self.n, &range)?;
                    (taylor_poly(*f, self.n).compose(&qa), rem + lip * da)
                }
            }
        })
    }
}
