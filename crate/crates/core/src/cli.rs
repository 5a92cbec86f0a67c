//! `polycert check` and `polycert gen`.
//!
//! Exit codes: 0 when every certificate is certified, 1 when at least one is
//! not, 2 on unreadable or malformed input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::cert::{emit_report, emit_report_pretty, parse_certificate, parse_expr, parse_zero_hints};
use crate::gen::{generate_certificate, DEFAULT_SAMPLES};
use crate::numerics::{parse_rational, to_sci, Interval};
use crate::validate::{check_certificate, CheckOptions, CheckReport, ConfInterval, Verdict, DEFAULT_MAX_DEPTH};
use crate::approx::DEFAULT_PI_TERMS;

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "polycert", version, about = "Check polynomial approximation error certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check one or more certificate files.
    Check(CheckArgs),
    /// Generate a certificate by Chebyshev interpolation.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(required = true)]
    certs: Vec<PathBuf>,
    /// Zero hints for the derivative of the error polynomial (single certificate only).
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Print JSON reports instead of one-line summaries.
    #[arg(long)]
    json: bool,
    /// Also write all reports as a JSON array to this path.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: u32,
    #[arg(long, default_value_t = DEFAULT_PI_TERMS, value_parser = clap::value_parser!(u32).range(1..))]
    pi_terms: u32,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Expression to approximate, e.g. "cos(x + 1)".
    #[arg(long = "fn", allow_hyphen_values = true)]
    func: String,
    #[arg(long, allow_hyphen_values = true)]
    lo: String,
    #[arg(long, allow_hyphen_values = true)]
    hi: String,
    #[arg(long)]
    deg: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of points used to estimate the approximation error.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

enum Outcome {
    Checked(CheckReport),
    BadInput(String),
}

fn check_one(path: &PathBuf, hints: Option<&[ConfInterval]>, opts: &CheckOptions) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::BadInput(format!("cannot read: {e}")),
    };
    match parse_certificate(&text) {
        Ok(cert) => Outcome::Checked(check_certificate(&cert, hints, opts)),
        Err(e) => Outcome::BadInput(format!("{} ({})", e, e.code())),
    }
}

fn summary(report: &CheckReport) -> String {
    let num = |r: &crate::numerics::Rational| to_sci(r, 6);
    match &report.verdict {
        Verdict::Certified => {
            let bound = report.extremal.as_ref().map_or("0".into(), |e| num(&e.bound));
            let gamma = report.gamma.as_ref().map_or("?".into(), num);
            let delta = report.delta1.as_ref().map_or("?".into(), num);
            format!(
                "CERTIFIED (delta={delta}, bound={bound} <= gamma={gamma}, zeros={})",
                report.num_zeros.unwrap_or(0)
            )
        }
        Verdict::NotCertified { reason, message } => format!("NOT CERTIFIED [{reason}] {message}"),
        Verdict::Error { reason, message } => format!("ERROR [{reason}] {message}"),
    }
}

fn cmd_check(args: CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let hints = match &args.zeros {
        Some(_) if args.certs.len() != 1 => {
            let _ = writeln!(err, "--zeros applies to a single certificate");
            return EXIT_BAD_INPUT;
        }
        Some(path) => match std::fs::read_to_string(path).map_err(|e| e.to_string()).and_then(|t| {
            parse_zero_hints(&t).map_err(|e| e.to_string())
        }) {
            Ok(h) => Some(h),
            Err(e) => {
                let _ = writeln!(err, "{}: {e}", path.display());
                return EXIT_BAD_INPUT;
            }
        },
        None => None,
    };
    let opts = CheckOptions {
        max_depth: args.max_depth,
        pi_terms: args.pi_terms,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs as usize).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "cannot start worker pool: {e}");
            return EXIT_BAD_INPUT;
        }
    };
    let outcomes: Vec<Outcome> = pool.install(|| {
        args.certs
            .par_iter()
            .map(|p| check_one(p, hints.as_deref(), &opts))
            .collect()
    });

    let mut code = EXIT_CERTIFIED;
    let mut collected = Vec::new();
    for (path, outcome) in args.certs.iter().zip(&outcomes) {
        match outcome {
            Outcome::Checked(report) => {
                if !report.verdict.is_certified() {
                    code = code.max(EXIT_NOT_CERTIFIED);
                }
                if args.json {
                    let _ = writeln!(out, "{}", emit_report_pretty(report));
                } else {
                    let _ = writeln!(out, "{}: {}", path.display(), summary(report));
                }
                collected.push(format!(
                    "{{\"file\":{},\"report\":{}}}",
                    serde_json::to_string(&path.display().to_string()).unwrap(),
                    emit_report(report)
                ));
            }
            Outcome::BadInput(msg) => {
                code = EXIT_BAD_INPUT;
                let _ = writeln!(err, "{}: {msg}", path.display());
            }
        }
    }
    if let Some(report_path) = &args.report {
        let body = format!("[{}]\n", collected.join(",\n"));
        if let Err(e) = std::fs::write(report_path, body) {
            let _ = writeln!(err, "{}: cannot write report: {e}", report_path.display());
            return EXIT_BAD_INPUT;
        }
    }
    code
}

fn cmd_gen(args: GenArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let fail = |err: &mut dyn Write, msg: String| {
        let _ = writeln!(err, "{msg}");
        EXIT_BAD_INPUT
    };
    let (expr, var) = match parse_expr(&args.func) {
        Ok(r) => r,
        Err(e) => return fail(err, format!("--fn: {e}")),
    };
    let (lo, hi) = match (parse_rational(&args.lo), parse_rational(&args.hi)) {
        (Ok(lo), Ok(hi)) => (lo, hi),
        (Err(e), _) | (_, Err(e)) => return fail(err, e.to_string()),
    };
    if lo >= hi {
        return fail(err, "need --lo < --hi".into());
    }
    if args.deg == 0 {
        return fail(err, "need --deg >= 1".into());
    }
    let on = Interval::new(lo, hi);
    let cert = match generate_certificate(&expr, var.as_deref().unwrap_or("x"), &on, args.deg, args.samples) {
        Ok(c) => c,
        Err(e) => return fail(err, e.to_string()),
    };
    let text = cert.to_string();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return fail(err, format!("{}: {e}", path.display()));
            }
        }
        None => {
            let _ = write!(out, "{text}");
        }
    }
    EXIT_CERTIFIED
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_CERTIFIED
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_BAD_INPUT
                }
            };
        }
    };
    match cli.command {
        Command::Check(a) => cmd_check(a, out, err),
        Command::Gen(a) => cmd_gen(a, out, err),
    }
}
