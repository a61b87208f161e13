//! The `zetaform` command line.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 form not integrable,
//! 3 verification failure.

pub mod parse;
pub mod records;
pub mod scan;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use zetaform_core::exactalg::{format_rational, parse_rational, Rational};
use zetaform_core::forms::{ball_rivoal_form, is_integrable, tau_form, tau_symmetry, ZetaIntegrand};
use zetaform_core::numeric::verify_linear_form;
use zetaform_core::periods::{eulerian_poly, eulerian_triangle, matrix_q, verify_sigma_diagonal};
use zetaform_core::zeta_coeffs::{coefficients, hypergeometric_params, ZetaCoefficients};

use crate::parse::{parse_form, ParseError};
use crate::records::{coeff_map, BallRivoalRecord, CheckRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_INTEGRABLE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

pub const MAX_DIGITS: u32 = 2000;
pub const MAX_PERIODS_N: usize = 24;
pub const MAX_EULERIAN: usize = 300;

#[derive(Parser, Debug)]
#[command(name = "zetaform", version, about = "Exact linear forms in zeta values from cube integrals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exact coefficients a0, a2, ..., an of the integral.
    Coeffs(FormArgs),
    /// Whether the integral converges absolutely.
    Integrable(FormArgs),
    /// Image under x_i -> 1/x_i and the resulting symmetry.
    Tau(FormArgs),
    /// Coefficients, parity and weight-drop data for a Ball-Rivoal form.
    Ballrivoal(BallRivoalArgs),
    /// Exhaustive scan over Ball-Rivoal parameters, written as JSON Lines.
    Scan(scan::ScanArgs),
    /// Eulerian polynomial or triangle of Eulerian numbers.
    #[command(group(ArgGroup::new("what").required(true).args(["r", "table"])))]
    Eulerian(EulerianArgs),
    /// Exact checks of the period-matrix identities.
    Periods(PeriodsArgs),
    /// Numerical cross-check of the exact coefficients.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct FormArgs {
    /// Integrand such as "x1*(1-x2)/(1-x1*x2)^2".
    #[arg(allow_hyphen_values = true)]
    expr: String,
    /// Dimension, when larger than the largest variable index.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct BallRivoalArgs {
    /// Comma-separated positive integers.
    #[arg(long, required = true, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
    u: Vec<u32>,
    /// Comma-separated positive integers.
    #[arg(long, required = true, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
    v: Vec<u32>,
    #[arg(long = "N")]
    big_n: u32,
    /// Also run the numerical verification.
    #[arg(long)]
    check: bool,
    #[arg(long = "K", default_value_t = 100_000)]
    k_terms: u64,
    #[arg(long, default_value_t = 30)]
    digits: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct EulerianArgs {
    /// Print the Eulerian polynomial E_r.
    #[arg(long)]
    r: Option<usize>,
    /// Print rows 0..=m of the Eulerian triangle.
    #[arg(long)]
    table: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct PeriodsArgs {
    /// Check the identities for every n up to this bound.
    #[arg(long = "verify-n", default_value_t = 8)]
    verify_n: usize,
    /// Print Q_m with exact rational entries.
    #[arg(long = "print-Q")]
    print_q: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(allow_hyphen_values = true)]
    expr: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "K", default_value_t = 100_000)]
    k_terms: u64,
    #[arg(long, default_value_t = 30)]
    digits: u32,
    /// Verify these coefficients `a0,a2,...,an` instead of the computed ones.
    #[arg(long, allow_hyphen_values = true)]
    claim: Option<String>,
    #[arg(long)]
    json: bool,
}

/// Why a command stopped early.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse(ParseError),
    NotIntegrable,
    Engine(zetaform_core::Error),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::NotIntegrable | Failure::Engine(zetaform_core::Error::NotIntegrable) => EXIT_NOT_INTEGRABLE,
            _ => EXIT_USAGE,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Parse(e) => e.kind(),
            Failure::NotIntegrable | Failure::Engine(zetaform_core::Error::NotIntegrable) => "not_integrable",
            Failure::Engine(_) => "engine",
            Failure::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Parse(e) => e.to_string(),
            Failure::NotIntegrable => zetaform_core::Error::NotIntegrable.to_string(),
            Failure::Engine(e) => e.to_string(),
        }
    }
}

impl From<zetaform_core::Error> for Failure {
    fn from(e: zetaform_core::Error) -> Self {
        Failure::Engine(e)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    column: Option<usize>,
}

type Outcome = Result<i32, Failure>;

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let json = match &cli.cmd {
        Cmd::Coeffs(a) | Cmd::Integrable(a) | Cmd::Tau(a) => a.json,
        Cmd::Ballrivoal(a) => a.json,
        Cmd::Scan(_) => false,
        Cmd::Eulerian(a) => a.json,
        Cmd::Periods(a) => a.json,
        Cmd::Check(a) => a.json,
    };
    let outcome = match cli.cmd {
        Cmd::Coeffs(a) => cmd_coeffs(&a, out),
        Cmd::Integrable(a) => cmd_integrable(&a, out),
        Cmd::Tau(a) => cmd_tau(&a, out),
        Cmd::Ballrivoal(a) => cmd_ballrivoal(&a, out),
        Cmd::Scan(a) => scan::run_scan(&a, out, err),
        Cmd::Eulerian(a) => cmd_eulerian(&a, out),
        Cmd::Periods(a) => cmd_periods(&a, out),
        Cmd::Check(a) => cmd_check(&a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            if json {
                let (line, column) = match &f {
                    Failure::Parse(p) => {
                        let (l, c) = p.position();
                        (Some(l), Some(c))
                    }
                    _ => (None, None),
                };
                let rec = ErrorRecord { error: ErrorBody { kind: f.kind(), message: f.message(), line, column } };
                let _ = emit_json(out, &rec);
            }
            f.exit_code()
        }
    }
}

fn parse(expr: &str, n: Option<usize>) -> Result<ZetaIntegrand, Failure> {
    Ok(parse_form(expr, n)?)
}

#[derive(Serialize)]
struct CoeffsRecord {
    form: String,
    n: usize,
    #[serde(rename = "N")]
    big_n: u32,
    a0: String,
    coeffs: BTreeMap<String, String>,
}

fn cmd_coeffs(a: &FormArgs, out: &mut dyn Write) -> Outcome {
    let w = parse(&a.expr, a.n)?;
    if !is_integrable(&w)? {
        return Err(Failure::NotIntegrable);
    }
    let c = coefficients(&w)?;
    if a.json {
        let rec = CoeffsRecord {
            form: w.to_string(),
            n: w.n(),
            big_n: w.pole_order(),
            a0: format_rational(c.a0()),
            coeffs: coeff_map(&c),
        };
        emit_json(out, &rec)?;
    } else {
        write!(out, "{c}")?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct IntegrableRecord {
    form: String,
    n: usize,
    #[serde(rename = "N")]
    big_n: u32,
    integrable: bool,
}

fn cmd_integrable(a: &FormArgs, out: &mut dyn Write) -> Outcome {
    let w = parse(&a.expr, a.n)?;
    let ok = is_integrable(&w)?;
    if a.json {
        emit_json(out, &IntegrableRecord { form: w.to_string(), n: w.n(), big_n: w.pole_order(), integrable: ok })?;
    } else {
        writeln!(out, "{ok}")?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_NOT_INTEGRABLE })
}

#[derive(Serialize)]
struct TauRecord {
    form: String,
    image: String,
    symmetry: &'static str,
}

fn cmd_tau(a: &FormArgs, out: &mut dyn Write) -> Outcome {
    let w = parse(&a.expr, a.n)?;
    let image = tau_form(&w);
    let sym = tau_symmetry(&w);
    if a.json {
        emit_json(out, &TauRecord { form: w.to_string(), image: image.to_string(), symmetry: sym.as_str() })?;
    } else {
        writeln!(out, "image: {image}")?;
        writeln!(out, "symmetry: {sym}")?;
    }
    Ok(EXIT_OK)
}

fn check_digits(digits: u32, k_terms: u64) -> Result<(), Failure> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Failure::Usage(format!("--digits must be between 1 and {MAX_DIGITS}")));
    }
    if k_terms == 0 {
        return Err(Failure::Usage("--K must be positive".into()));
    }
    Ok(())
}

fn cmd_ballrivoal(a: &BallRivoalArgs, out: &mut dyn Write) -> Outcome {
    if a.u.len() != a.v.len() || a.u.is_empty() {
        return Err(Failure::Usage("--u and --v must have the same, positive length".into()));
    }
    if a.check {
        check_digits(a.digits, a.k_terms)?;
    }
    let mut rec = BallRivoalRecord::evaluate(&a.u, &a.v, a.big_n)?;
    let w = ball_rivoal_form(&a.u, &a.v, a.big_n)?;
    let hyper = hypergeometric_params(&a.u, &a.v, a.big_n)?;
    let mut code = if rec.scan.integrable { EXIT_OK } else { EXIT_NOT_INTEGRABLE };
    if a.check && rec.scan.integrable && a.big_n > 0 {
        let c = coefficients(&w)?;
        let report = verify_linear_form(&w, &c, a.k_terms, a.digits)?;
        if !report.pass {
            code = EXIT_VERIFY_FAILED;
        }
        rec.check = Some(CheckRecord::from_report(&w, &c, &report));
    }
    rec.well_poised = hyper.well_poised;
    if a.json {
        emit_json(out, &rec)?;
    } else {
        let s = &rec.scan;
        writeln!(out, "form: {}", rec.form)?;
        writeln!(out, "integrable: {}", s.integrable)?;
        if let (Some(a0), Some(coeffs)) = (&s.a0, &s.coeffs) {
            writeln!(out, "a0 = {a0}")?;
            for (r, c) in coeffs {
                writeln!(out, "a{r} = {c}")?;
            }
        }
        writeln!(out, "symmetry: {}", s.tau)?;
        writeln!(out, "well_poised: {}", rec.well_poised)?;
        let zeros: Vec<String> = s.predicted_zeros.iter().map(u32::to_string).collect();
        writeln!(out, "predicted_zeros: [{}]", zeros.join(", "))?;
        writeln!(out, "weight_drop_forced: {}", s.weight_drop_forced)?;
        writeln!(out, "weight_drop: {}", s.weight_drop)?;
        if let Some(chk) = &rec.check {
            writeln!(out, "series  = {} +/- {}", chk.series.mid, chk.series.rad)?;
            writeln!(out, "zeta    = {} +/- {}", chk.zeta.mid, chk.zeta.rad)?;
            writeln!(out, "K = {}, digits = {}", chk.k_terms, chk.digits)?;
            writeln!(out, "{}", if chk.pass { "PASS" } else { "FAIL" })?;
        }
    }
    if a.check && a.big_n == 0 {
        writeln!(out, "note: N = 0 forms are exact polynomial integrals; nothing to check numerically")?;
    }
    Ok(code)
}

#[derive(Serialize)]
struct EulerianPolyRecord {
    r: usize,
    polynomial: String,
    coeffs: Vec<String>,
}

#[derive(Serialize)]
struct EulerianTableRecord {
    table: Vec<Vec<String>>,
}

fn cmd_eulerian(a: &EulerianArgs, out: &mut dyn Write) -> Outcome {
    if let Some(r) = a.r {
        if r > MAX_EULERIAN {
            return Err(Failure::Usage(format!("--r must be at most {MAX_EULERIAN}")));
        }
        let e = eulerian_poly(r as u32);
        let coeffs: Vec<String> = e.coeffs().iter().map(format_rational).collect();
        let polynomial = e.display_with("x");
        if a.json {
            emit_json(out, &EulerianPolyRecord { r, polynomial, coeffs })?;
        } else {
            writeln!(out, "E_{r}(x) = {polynomial}")?;
        }
    } else if let Some(m) = a.table {
        if m > MAX_EULERIAN {
            return Err(Failure::Usage(format!("--table must be at most {MAX_EULERIAN}")));
        }
        let table: Vec<Vec<String>> =
            eulerian_triangle(m).iter().map(|row| row.iter().map(ToString::to_string).collect()).collect();
        if a.json {
            emit_json(out, &EulerianTableRecord { table })?;
        } else {
            for (i, row) in table.iter().enumerate() {
                writeln!(out, "{i}: {}", row.join(" "))?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PeriodsRow {
    n: usize,
    sigma_diagonal: bool,
    last_row_ones: bool,
}

#[derive(Serialize)]
struct MatrixRecord {
    n: usize,
    rows: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct PeriodsRecord {
    verify_n: usize,
    pass: bool,
    results: Vec<PeriodsRow>,
    q: Option<MatrixRecord>,
}

fn cmd_periods(a: &PeriodsArgs, out: &mut dyn Write) -> Outcome {
    let too_big = |m: usize| m == 0 || m > MAX_PERIODS_N;
    if too_big(a.verify_n) || a.print_q.is_some_and(too_big) {
        return Err(Failure::Usage(format!("matrix sizes must be between 1 and {MAX_PERIODS_N}")));
    }
    let mut results = Vec::new();
    for n in 1..=a.verify_n {
        let q = matrix_q(n)?;
        let last_row_ones = q.row(n - 1).iter().all(|x| x == &zetaform_core::exactalg::int(1));
        results.push(PeriodsRow { n, sigma_diagonal: verify_sigma_diagonal(n)?, last_row_ones });
    }
    let pass = results.iter().all(|r| r.sigma_diagonal && r.last_row_ones);
    let q = match a.print_q {
        Some(m) => {
            let q = matrix_q(m)?;
            let rows = (0..m).map(|i| q.row(i).iter().map(format_rational).collect()).collect();
            Some(MatrixRecord { n: m, rows })
        }
        None => None,
    };
    if a.json {
        emit_json(out, &PeriodsRecord { verify_n: a.verify_n, pass, results, q })?;
    } else {
        for r in &results {
            writeln!(out, "n = {}: sigma diagonal {}, last row of Q all ones {}", r.n, r.sigma_diagonal, r.last_row_ones)?;
        }
        writeln!(out, "{}", if pass { "PASS" } else { "FAIL" })?;
        if let Some(m) = &q {
            writeln!(out, "Q_{} =", m.n)?;
            let width = m.rows.iter().flatten().map(String::len).max().unwrap_or(1);
            for row in &m.rows {
                let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                writeln!(out, "[ {} ]", cells.join("  "))?;
            }
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn parse_claim(text: &str, n: usize) -> Result<ZetaCoefficients, Failure> {
    let vals: Vec<Rational> = text
        .split(',')
        .map(|p| parse_rational(p.trim()).ok_or_else(|| Failure::Usage(format!("'{p}' is not a rational"))))
        .collect::<Result<_, _>>()?;
    if vals.len() != n {
        return Err(Failure::Usage(format!("--claim needs {n} values a0,a2,...,a{n}")));
    }
    let a = vals[1..].iter().enumerate().map(|(i, c)| (i as u32 + 2, c.clone())).collect();
    Ok(ZetaCoefficients::new(n, vals[0].clone(), a)?)
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Outcome {
    check_digits(a.digits, a.k_terms)?;
    let w = parse(&a.expr, a.n)?;
    if !is_integrable(&w)? {
        return Err(Failure::NotIntegrable);
    }
    if w.pole_order() == 0 {
        return Err(Failure::Usage("forms with N = 0 integrate to a rational; use `coeffs`".into()));
    }
    let c = match &a.claim {
        Some(text) => parse_claim(text, w.n())?,
        None => coefficients(&w)?,
    };
    let report = verify_linear_form(&w, &c, a.k_terms, a.digits)?;
    if a.json {
        emit_json(out, &CheckRecord::from_report(&w, &c, &report))?;
    } else {
        write!(out, "{c}")?;
        writeln!(out, "{report}")?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
