//! Command-line front end. [`run`] takes the argument list and returns the
//! exit code and both output streams, so the binary is a thin shell around it.

mod render;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub use render::{Format, Report};
use render::{grid_text, interval_json, interval_text, object, sum_json, sum_text, table_text};

use crate::bounds::{certification_threshold, certify, CertificateReport};
use crate::dedekind::{components1_check, nfm_check};
use crate::elimination::{d_bold, discriminant, resultant};
use crate::error::Error;
use crate::modp::{is_prime_u64, omega};
use crate::poly::{parse_coeffs_json, parse_poly, IntPoly};
use crate::prime_sums::{f_value, loglog, mertens_q, omega_sum, script_p, SumMode};
use crate::real::{Interval, Precision};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Quartics of the factor-count table, with their factorizations and `k`.
pub const TABLE1: [(&str, &str, u32); 4] = [
    ("x^4+1", "x^4+1", 1),
    ("x^4+4", "(x^2-2x+2)(x^2+2x+2)", 2),
    ("x^4-1", "(x^2+1)(x-1)(x+1)", 3),
    ("x^4-5x^2+4", "(x-1)(x+1)(x-2)(x+2)", 4),
];
pub const TABLE1_X: [f64; 3] = [100.0, 1000.0, 10000.0];
pub const TABLE2_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "factor-count", version, about = "Count distinct irreducible factors of integer polynomials through prime sums")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Working precision in mantissa bits.
    #[arg(long, global = true, default_value_t = 96, value_parser = clap::value_parser!(u32).range(64..=1 << 16))]
    precision: u32,
    /// Sum in exact rational arithmetic.
    #[arg(long, global = true)]
    exact: bool,
    /// Decimal places for printed values.
    #[arg(long, global = true)]
    digits: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct PolyArg {
    /// Polynomial expression, e.g. "x^4-5x^2+4".
    poly: Option<String>,
    /// Coefficients as a JSON array, constant term first.
    #[arg(long)]
    coeffs: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Number of roots of f modulo a prime.
    Omega {
        #[command(flatten)]
        f: PolyArg,
        #[arg(long)]
        p: u64,
    },
    /// Resultant of two polynomials.
    Resultant {
        /// Two polynomial expressions.
        #[arg(num_args = 0..=2)]
        polys: Vec<String>,
        /// Two coefficient arrays, in order.
        #[arg(long)]
        coeffs: Vec<String>,
    },
    /// Discriminant and normalized discriminant.
    Discriminant {
        #[command(flatten)]
        f: PolyArg,
    },
    /// Sum of 1/p over primes p <= x.
    MertensQ { x: f64 },
    /// Sum over k >= 2 of prime zeta values restricted to p > x.
    ScriptP {
        x: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// F(x) = sum_{p <= x} omega_f(p)/p / loglog x.
    FValue {
        #[command(flatten)]
        f: PolyArg,
        #[arg(long)]
        x: f64,
    },
    /// Compare the root-count sum of irreducible g with the prime-ideal sum of its field.
    NfmCheck {
        #[command(flatten)]
        f: PolyArg,
        #[arg(long)]
        x: f64,
        /// Assert that the ring generated by a root is the full ring of integers.
        #[arg(long)]
        monogenic: bool,
    },
    /// Same comparison for monic h against the component bound.
    Components1 {
        #[command(flatten)]
        f: PolyArg,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        monogenic: bool,
    },
    /// Estimate the factor count and test whether the explicit bound certifies it.
    Certify {
        #[command(flatten)]
        f: PolyArg,
        #[arg(long)]
        x: f64,
    },
    /// Smallest loglog x at which the explicit bound falls below 1/2.
    Threshold {
        #[command(flatten)]
        f: PolyArg,
    },
    /// F(x) for four quartics at x = 100, 1000, 10000.
    Table1,
    /// Script P(x) for x = 1..10.
    Table2,
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Coefficients(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Ctx {
    prec: Precision,
    mode: SumMode,
    digits: Option<usize>,
}

impl Ctx {
    fn digits(&self, default: usize) -> usize {
        self.digits.unwrap_or(default)
    }
}

/// Parses `args` (program name first) and runs the verb. Honours
/// `FC_THREADS` as a cap on worker threads.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let threads = match std::env::var("FC_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return usage(format!("FC_THREADS must be a positive integer, got {v:?}")),
        },
        Err(_) => 0,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return Outcome { code: EXIT_DOMAIN, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let ctx = Ctx {
        prec: Precision::new(cli.precision as usize),
        mode: if cli.exact { SumMode::Exact } else { SumMode::Float },
        digits: cli.digits,
    };
    finish(pool.install(|| dispatch(&cli.verb, &ctx)), cli.format)
}

fn finish(result: Res<Report>, format: Format) -> Outcome {
    match result {
        Ok(report) => Outcome {
            code: if report.verified { EXIT_OK } else { EXIT_VERIFY },
            stdout: report.render(format),
            stderr: String::new(),
        },
        Err(Failure::Usage(m)) => usage(m),
        Err(Failure::Domain(e)) => Outcome { code: EXIT_DOMAIN, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn usage(message: String) -> Outcome {
    Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {message}\n") }
}

fn read_poly(arg: &PolyArg) -> Res<IntPoly> {
    match (&arg.poly, &arg.coeffs) {
        (Some(expr), None) => Ok(parse_poly(expr)?),
        (None, Some(c)) => Ok(parse_coeffs_json(c)?),
        (Some(_), Some(_)) => Err(Failure::Usage("give the polynomial either as an expression or with --coeffs".into())),
        (None, None) => Err(Failure::Usage("missing polynomial".into())),
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn dispatch(verb: &Verb, ctx: &Ctx) -> Res<Report> {
    match verb {
        Verb::Omega { f, p } => omega_verb(&read_poly(f)?, *p),
        Verb::Resultant { polys, coeffs } => resultant_verb(polys, coeffs),
        Verb::Discriminant { f } => discriminant_verb(&read_poly(f)?),
        Verb::MertensQ { x } => {
            let v = mertens_q(*x, ctx.mode, ctx.prec)?;
            let d = ctx.digits(12);
            let json = object(vec![("x", json!(num(*x))), ("mertens_q", sum_json(&v, d))]);
            Ok(Report::new(table_text(&[("M_Q(x)", sum_text(&v, d))]), json))
        }
        Verb::ScriptP { x, tol } => {
            let v = script_p(*x, *tol, ctx.prec)?;
            let d = ctx.digits(10);
            let json = object(vec![("x", json!(num(*x))), ("tol", json!(format!("{tol:e}"))), ("script_p", sum_json(&v, d))]);
            Ok(Report::new(v.to_decimal(d), json))
        }
        Verb::FValue { f, x } => f_value_verb(&read_poly(f)?, *x, ctx),
        Verb::NfmCheck { f, x, monogenic } => nfm_verb(&read_poly(f)?, *x, *monogenic, ctx),
        Verb::Components1 { f, x, monogenic } => components1_verb(&read_poly(f)?, *x, *monogenic, ctx),
        Verb::Certify { f, x } => {
            let r = certify(&read_poly(f)?, *x, ctx.mode, ctx.prec)?;
            Ok(certificate_report(&r, ctx))
        }
        Verb::Threshold { f } => threshold_verb(&read_poly(f)?, ctx),
        Verb::Table1 => table1(ctx),
        Verb::Table2 => table2(ctx),
    }
}

fn omega_verb(f: &IntPoly, p: u64) -> Res<Report> {
    if !is_prime_u64(p) {
        return Err(Failure::Domain(Error::NotPrime(p)));
    }
    let w = omega(f, p)?;
    let json = object(vec![("poly", json!(f.to_string())), ("p", json!(p.to_string())), ("omega", json!(w.to_string()))]);
    Ok(Report::new(format!("omega({p}) = {w}"), json))
}

fn resultant_verb(polys: &[String], coeffs: &[String]) -> Res<Report> {
    let parsed: Vec<IntPoly> = match (polys.len(), coeffs.len()) {
        (2, 0) => polys.iter().map(|s| parse_poly(s)).collect::<Result<_, _>>()?,
        (0, 2) => coeffs.iter().map(|s| parse_coeffs_json(s)).collect::<Result<_, _>>()?,
        _ => return Err(Failure::Usage("resultant needs two polynomials, both as expressions or both with --coeffs".into())),
    };
    let r = resultant(&parsed[0], &parsed[1])?;
    let json = object(vec![
        ("f", json!(parsed[0].to_string())),
        ("g", json!(parsed[1].to_string())),
        ("resultant", json!(r.to_string())),
    ]);
    Ok(Report::new(format!("R(f, g) = {r}"), json))
}

fn discriminant_verb(f: &IntPoly) -> Res<Report> {
    let d = discriminant(f)?;
    let bold = d_bold(f)?;
    let degree = f.degree().unwrap_or(0);
    let text = table_text(&[("degree", degree.to_string()), ("D_f", d.to_string()), ("D_bold", bold.to_string())]);
    let json = object(vec![
        ("poly", json!(f.to_string())),
        ("degree", json!(degree.to_string())),
        ("discriminant", json!(d.to_string())),
        ("d_bold", json!(bold.to_string())),
    ]);
    Ok(Report::new(text, json))
}

fn f_value_verb(f: &IntPoly, x: f64, ctx: &Ctx) -> Res<Report> {
    let d = ctx.digits(12);
    let s = omega_sum(f, x, ctx.mode, ctx.prec)?;
    let fx = f_value(f, x, ctx.mode, ctx.prec)?;
    let ll = loglog(x, ctx.prec)?;
    let text = table_text(&[
        ("sum omega_f(p)/p", sum_text(&s, d)),
        ("loglog x", interval_text(&ll, d)),
        ("F(x)", sum_text(&fx, d)),
    ]);
    let json = object(vec![
        ("poly", json!(f.to_string())),
        ("x", json!(num(x))),
        ("omega_sum", sum_json(&s, d)),
        ("loglog_x", interval_json(&ll, d)),
        ("f_value", sum_json(&fx, d)),
    ]);
    Ok(Report::new(text, json))
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

fn nfm_verb(g: &IntPoly, x: f64, monogenic: bool, ctx: &Ctx) -> Res<Report> {
    let d = ctx.digits(12);
    let r = nfm_check(g, x, monogenic, ctx.mode, ctx.prec)?;
    let text = table_text(&[
        ("g", r.g.to_string()),
        ("h", r.h.to_string()),
        ("sum omega_g(p)/p", sum_text(&r.omega_side, d)),
        ("M_K(x)", sum_text(&r.ideal_side, d)),
        ("A_g", sum_text(&r.a_g, d)),
        ("bound on |A_g|", interval_text(&r.a_bound, d)),
        ("trusted", yes_no(r.trusted)),
        ("holds", yes_no(r.holds)),
    ]);
    let json = object(vec![
        ("g", json!(r.g.to_string())),
        ("h", json!(r.h.to_string())),
        ("x", json!(num(x))),
        ("omega_side", sum_json(&r.omega_side, d)),
        ("ideal_side", sum_json(&r.ideal_side, d)),
        ("a_g", sum_json(&r.a_g, d)),
        ("a_bound", interval_json(&r.a_bound, d)),
        ("trusted", json!(r.trusted)),
        ("holds", json!(r.holds)),
    ]);
    let mut report = Report::new(text, json);
    report.verified = r.holds;
    Ok(report)
}

fn components1_verb(h: &IntPoly, x: f64, monogenic: bool, ctx: &Ctx) -> Res<Report> {
    let d = ctx.digits(12);
    let r = components1_check(h, x, monogenic, ctx.mode, ctx.prec)?;
    let text = table_text(&[
        ("M_K(x)", sum_text(&r.ideal_side, d)),
        ("sum omega_h(p)/p", sum_text(&r.omega_side, d)),
        ("difference", sum_text(&r.difference, d)),
        ("bound", interval_text(&r.bound, d)),
        ("trusted", yes_no(r.trusted)),
        ("holds", yes_no(r.holds)),
    ]);
    let json = object(vec![
        ("h", json!(h.to_string())),
        ("x", json!(num(x))),
        ("ideal_side", sum_json(&r.ideal_side, d)),
        ("omega_side", sum_json(&r.omega_side, d)),
        ("difference", sum_json(&r.difference, d)),
        ("bound", interval_json(&r.bound, d)),
        ("trusted", json!(r.trusted)),
        ("holds", json!(r.holds)),
    ]);
    let mut report = Report::new(text, json);
    report.verified = r.holds;
    Ok(report)
}

fn certificate_report(r: &CertificateReport, ctx: &Ctx) -> Report {
    let d = ctx.digits(6);
    let bd = &r.breakdown;
    let log_x = (r.x > 1.0).then(|| Interval::from_f64(r.x, ctx.prec).ln());
    let u_star = r.u_star.map(|u| format!("{u:.6}"));
    let mut lines = vec![
        ("f", r.poly.to_string()),
        ("x", num(r.x)),
        ("F(x)", sum_text(&r.f_x, d)),
        ("k_hat", r.k_hat.to_string()),
        ("tie", yes_no(r.tie)),
        ("|D_f|", bd.disc_abs.to_string()),
        ("D_bold", bd.d_bold.to_string()),
        ("x threshold", bd.threshold_display()),
        ("d M_Q(|D_f|)", interval_text(&bd.mertens_term, d)),
        ("A", interval_text(&bd.a_term, d)),
        ("C", interval_text(&bd.c_term, d)),
        ("Lambda", bd.lambda.render()),
    ];
    if let Some(lx) = log_x.as_ref().filter(|lx| lx.is_positive()) {
        if let Ok(b) = bd.b_term(lx) {
            lines.push(("B(x)", b.render()));
        }
    }
    lines.push(("u* = loglog x*", u_star.clone().unwrap_or_else(|| "none".into())));
    let mut text = table_text(&lines);
    for w in &r.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    let verdict = match &r.bound {
        Some(b) => format!("CERTIFIED: {} (bound = {})", yes_no(r.certified), b.render()),
        None => format!("CERTIFIED: no (x below {})", bd.threshold_display()),
    };
    text.push_str(&verdict);
    text.push('\n');
    let json = object(vec![
        ("poly", json!(r.poly.to_string())),
        ("x", json!(num(r.x))),
        ("f_value", sum_json(&r.f_x, d)),
        ("k_hat", json!(r.k_hat.to_string())),
        ("tie", json!(r.tie)),
        ("bound", r.bound.as_ref().map_or(Value::Null, |b| b.to_json())),
        ("breakdown", bd.to_json(log_x.as_ref().filter(|lx| lx.is_positive()))),
        ("certified", json!(r.certified)),
        ("u_star", u_star.map_or(Value::Null, Value::String)),
        ("warnings", json!(r.warnings)),
    ]);
    Report::new(text, json)
}

fn threshold_verb(f: &IntPoly, ctx: &Ctx) -> Res<Report> {
    let t = certification_threshold(f, ctx.prec)?;
    let u = format!("{:.6}", t.u_star);
    let log_x = format!("{:.6e}", t.log_x_star());
    let text = table_text(&[
        ("u* = loglog x*", u.clone()),
        ("log x*", log_x.clone()),
        ("bound at x*", t.rhs.render()),
    ]);
    let json = object(vec![
        ("poly", json!(f.to_string())),
        ("u_star", json!(u)),
        ("log_x_star", json!(log_x)),
        ("bound", t.rhs.to_json()),
    ]);
    Ok(Report::new(text, json))
}

fn table1(ctx: &Ctx) -> Res<Report> {
    let d = ctx.digits(4);
    let mut rows = vec![vec![
        "f".to_string(),
        "factorization".into(),
        "k".into(),
        "F(100)".into(),
        "F(1000)".into(),
        "F(10000)".into(),
    ]];
    let mut entries = Vec::new();
    for (expr, factors, k) in TABLE1 {
        let f = parse_poly(expr)?;
        let mut row = vec![f.to_string(), factors.to_string(), k.to_string()];
        let mut values = serde_json::Map::new();
        for x in TABLE1_X {
            let v = f_value(&f, x, ctx.mode, ctx.prec)?.to_decimal(d);
            values.insert(num(x), json!(v.clone()));
            row.push(v);
        }
        entries.push(json!({"f": f.to_string(), "factorization": factors, "k": k.to_string(), "f_value": values}));
        rows.push(row);
    }
    let json = object(vec![("mode", json!(render::mode_name(ctx.mode))), ("rows", Value::Array(entries))]);
    Ok(Report { text: grid_text(&rows), json, rows, verified: true })
}

fn table2(ctx: &Ctx) -> Res<Report> {
    let d = ctx.digits(10);
    let mut rows = vec![vec!["x".to_string(), "P(x)".into()]];
    let mut entries = Vec::new();
    for x in 1..=10u32 {
        let v = script_p(x as f64, TABLE2_TOL, ctx.prec)?.to_decimal(d);
        entries.push(json!({"x": x.to_string(), "script_p": v.clone()}));
        rows.push(vec![x.to_string(), v]);
    }
    let json = object(vec![("tol", json!(format!("{TABLE2_TOL:e}"))), ("rows", Value::Array(entries))]);
    Ok(Report { text: grid_text(&rows), json, rows, verified: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_verification_exits_3() {
        let mut r = Report::new("holds = no".into(), json!({"holds": false}));
        r.verified = false;
        let out = finish(Ok(r), Format::Json);
        assert_eq!(out.code, EXIT_VERIFY);
        assert!(out.stdout.contains("\"holds\": false"));
    }

    #[test]
    fn error_classes() {
        let parse = Failure::from(parse_poly("x^").unwrap_err());
        assert_eq!(finish(Err(parse), Format::Text).code, EXIT_USAGE);
        assert_eq!(finish(Err(Failure::from(Error::NotSquarefree)), Format::Text).code, EXIT_DOMAIN);
    }

    #[test]
    fn csv_flattening() {
        let r = Report::new(String::new(), json!({"b": {"y": "2", "x": "1"}, "a": [1, 2], "c": null}));
        assert_eq!(r.render(Format::Csv), "a,b.x,b.y,c\n1;2,1,2,\n");
    }
}
