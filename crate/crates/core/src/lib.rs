//! Exact-arithmetic checker for polynomial approximation certificates.
//!
//! A certificate claims that a polynomial `p` approximates a univariate
//! elementary-function expression `f` on an interval `I` to within `eps`.
//! Checking runs in two phases, both in exact rational arithmetic:
//!
//! 1. [`approx`] replaces every `exp`, `sin`, `cos`, `ln` and `atan` in `f`
//!    by a truncated Taylor series, giving a polynomial `q` and an error
//!    bound `delta` with `|f - q| <= delta` on `I`.
//! 2. [`validate`] bounds the error polynomial `h = q - p` on `I` through the
//!    zeros of `h'`, counted with a Sturm chain ([`sturm`]) and localised by
//!    sign-change-validated intervals, and compares the bound with
//!    `eps - delta`.
//!
//! ```
//! use polycert::{cert::parse_certificate, validate::{check_certificate, CheckOptions}};
//!
//! let cert = parse_certificate("f = x * x; p = [0, 0, 1]; eps = 1/1000; I = [0, 1]; n = 4;").unwrap();
//! let report = check_certificate(&cert, None, &CheckOptions::default());
//! assert!(report.verdict.is_certified());
//! ```

pub mod approx;
pub mod cert;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod gen;
pub mod numerics;
pub mod poly;
pub mod sturm;
pub mod transc;
pub mod validate;

pub use approx::{approx_as_poly, eval_expr_interval, eval_expr_ref, ApproxResult, Expr};
pub use cert::{emit_report, parse_certificate, parse_report, parse_zero_hints, Certificate};
pub use error::{Error, ReasonCode, Result};
pub use numerics::{Interval, Rational};
pub use poly::Poly;
pub use sturm::{count_zeros, SturmChain};
pub use transc::ElemFn;
pub use validate::{check_certificate, CheckOptions, CheckReport, ConfInterval, Verdict};
