use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polycert::cert::format_zero_hints;
use polycert::{parse_report, ConfInterval, ReasonCode};
use tempfile::TempDir;

const IDENTITY: &str = "f = x; p = [0, 1]; eps = 1/1000; I = [-1, 1]; n = 4;";
const EXP_CUBIC: &str = "f = exp(x);
p = [1, 1001/1000, 1/2, 1/6];
eps = 1/100;
I = [0, 1/2];
n = 16;";

fn polycert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycert")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn identity_certifies() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "id.cert", IDENTITY);
    let out = polycert(&["check", s(&c)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("CERTIFIED"));
}

#[test]
fn perturbed_is_refused() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "bad.cert", "f = x; p = [1/100, 1]; eps = 1/1000; I = [-1, 1]; n = 4;");
    let out = polycert(&["check", s(&c)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("bound_exceeds_gamma"), "{}", stdout(&out));
}

#[test]
fn unknown_function_is_bad_input() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "tan.cert", "f = tan(x); p = [0, 1]; eps = 1/10; I = [0, 1/2]; n = 8;");
    let out = polycert(&["check", s(&c)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown_function"), "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
}

#[test]
fn missing_file_is_bad_input() {
    let out = polycert(&["check", "/nonexistent/x.cert"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(polycert(&["--help"]).status.code(), Some(0));
    assert_eq!(polycert(&[]).status.code(), Some(2));
    assert_eq!(polycert(&["check"]).status.code(), Some(2));
    assert_eq!(polycert(&["check", "--jobs", "0", "a"]).status.code(), Some(2));
}

#[test]
fn gen_then_check() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("sin.cert");
    let g = polycert(&["gen", "--fn", "sin(x - 2)", "--lo", "-1", "--hi", "3", "--deg", "5", "--out", s(&out_path)]);
    assert_eq!(g.status.code(), Some(0), "{}", stderr(&g));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("f = sin(x - 2);") && text.contains("n = 32;"), "{text}");
    let out = polycert(&["check", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn gen_to_stdout_keeps_variable_name() {
    let g = polycert(&["gen", "--fn", "exp(t)", "--lo", "0", "--hi", "0.25", "--deg", "2", "--samples", "50"]);
    assert_eq!(g.status.code(), Some(0));
    assert!(stdout(&g).starts_with("f = exp(t);"), "{}", stdout(&g));
}

#[test]
fn gen_rejects_bad_input() {
    let bad: &[&[&str]] = &[
        &["gen", "--fn", "exp(x)", "--lo", "1", "--hi", "0", "--deg", "3"],
        &["gen", "--fn", "exp(x)", "--lo", "1", "--hi", "1", "--deg", "3"],
        &["gen", "--fn", "exp(x)", "--lo", "0", "--hi", "1", "--deg", "0"],
        &["gen", "--fn", "exp(x", "--lo", "0", "--hi", "1", "--deg", "3"],
        &["gen", "--fn", "ln(x)", "--lo", "0", "--hi", "1", "--deg", "3"],
        &["gen", "--fn", "exp(x)", "--lo", "zero", "--hi", "1", "--deg", "3"],
    ];
    for args in bad {
        let out = polycert(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&out).is_empty());
    }
}

#[test]
fn endpoint_zero_is_reported_with_a_hint() {
    // p is the series itself up to x^2, so h' = x^2/2 + ... vanishes at 0;
    // the endpoint check fires before any Sturm chain is built.
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "exp0.cert", "f = exp(x); p = [1, 1, 1/2]; eps = 1/10; I = [0, 1/2]; n = 16;");
    let out = polycert(&["check", s(&c)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("endpoint_zero") && stdout(&out).contains("perturb"), "{}", stdout(&out));
}

#[test]
fn json_report_round_trips() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "exp.cert", EXP_CUBIC);
    let out = polycert(&["check", "--json", s(&c)]);
    assert_eq!(out.status.code(), Some(0));
    let rep = parse_report(&stdout(&out)).unwrap();
    assert!(rep.verdict.is_certified());
    assert!(rep.extremal.unwrap().bound <= rep.gamma.unwrap());
}

#[test]
fn report_file_lists_every_checked_certificate() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.cert", IDENTITY);
    let b = write(&dir, "b.cert", "f = x; p = [1, 1]; eps = 1/2; I = [0, 1]; n = 1;");
    let report = dir.path().join("report.json");
    let out = polycert(&["check", "--report", s(&report), s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[0]["file"], s(&a));
    assert_eq!(arr[0]["report"]["verdict"], "certified");
    assert_eq!(arr[1]["report"]["verdict"], "not_certified");
}

#[test]
fn batch_isolation_and_order() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "1-good.cert", IDENTITY);
    let broken = write(&dir, "2-broken.cert", "f = x; p = [0, 1]; eps = ; I = [0, 1]; n = 1;");
    let refused = write(&dir, "3-refused.cert", "f = x; p = [1, 1]; eps = 1/2; I = [0, 1]; n = 1;");
    let out = polycert(&["check", s(&good), s(&broken), s(&refused)]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "{text}");
    assert!(lines[0].contains("1-good") && lines[0].contains("CERTIFIED"));
    assert!(lines[1].contains("3-refused") && lines[1].contains("NOT CERTIFIED"));
    assert!(stderr(&out).contains("2-broken"));
}

#[test]
fn output_is_deterministic_and_independent_of_jobs() {
    let dir = TempDir::new().unwrap();
    let mut paths = Vec::new();
    for (i, f) in ["cos(x + 1)", "exp(x)", "atan(x)", "sin(x)"].iter().enumerate() {
        let path = dir.path().join(format!("{i}.cert"));
        let g = polycert(&["gen", "--fn", f, "--lo", "0", "--hi", "1/2", "--deg", "4", "--samples", "100", "--out", s(&path)]);
        assert_eq!(g.status.code(), Some(0));
        paths.push(path);
    }
    let mut args = vec!["check"];
    args.extend(paths.iter().map(|p| s(p)));
    let serial = stdout(&polycert(&args));
    assert_eq!(serial, stdout(&polycert(&args)));
    let mut parallel = vec!["check", "--jobs", "3"];
    parallel.extend(paths.iter().map(|p| s(p)));
    assert_eq!(serial, stdout(&polycert(&parallel)));
    assert_eq!(serial.lines().count(), 4);
}

#[test]
fn zero_hints_are_used_and_validated() {
    let dir = TempDir::new().unwrap();
    let c = dir.path().join("exp.cert");
    let g = polycert(&["gen", "--fn", "exp(x)", "--lo", "0", "--hi", "1/2", "--deg", "3", "--out", s(&c)]);
    assert_eq!(g.status.code(), Some(0));
    let rep = parse_report(&stdout(&polycert(&["check", "--json", s(&c)]))).unwrap();
    assert_eq!(rep.zeros.len(), 3);

    let hints = write(&dir, "good.zeros", &format_zero_hints(&rep.zeros));
    let out = polycert(&["check", "--zeros", s(&hints), s(&c)]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let mut wrong = rep.zeros.clone();
    wrong.push(ConfInterval::new(polycert::numerics::int(0), polycert::numerics::rat(1, 1000)));
    let hints = write(&dir, "bad.zeros", &format_zero_hints(&wrong));
    let out = polycert(&["check", "--json", "--zeros", s(&hints), s(&c)]);
    assert_eq!(out.status.code(), Some(1));
    let rep = parse_report(&stdout(&out)).unwrap();
    assert_eq!(rep.verdict.reason(), Some(ReasonCode::ZeroValidationFailed));

    let garbage = write(&dir, "garbage.zeros", "[1, oops]");
    assert_eq!(polycert(&["check", "--zeros", s(&garbage), s(&c)]).status.code(), Some(2));
    let other = write(&dir, "id.cert", IDENTITY);
    let out = polycert(&["check", "--zeros", s(&hints), s(&c), s(&other)]);
    assert_eq!(out.status.code(), Some(2));
}
