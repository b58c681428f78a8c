//! `picubed eval|compare|verify|catalog`: the command-line front end.
//!
//! [`run`] takes the argument list, the term-budget variable and the two
//! output streams, and returns the process exit code:
//! 0 success, 1 usage error, 2 term budget exceeded, 3 unwritable output,
//! 4 a failed identity check.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use picubed_core::numctx::{mk_context, to_scientific, to_sig_digits, PrecCtx};
use picubed_core::series::{
    eval_pi3_with, parse_rat, EvalOptions, EvalResult, SeriesId, DEFAULT_TERM_BUDGET,
};
use picubed_core::verify::{verify_identity_with, IdentityId, Report};
use picubed_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_OUTPUT: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Environment variable that caps the number of summed terms.
pub const BUDGET_ENV: &str = "PICUBED_TERM_BUDGET";

pub const CSV_HEADER: &str =
    "series_id,target,requested_digits,achieved_digits,terms_used,value_20,error_bound,uses_reference_pi";

#[derive(Debug, Parser)]
#[command(name = "picubed", version, about = "Evaluate and verify series for pi^3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one series to a certified number of significant digits.
    Eval(EvalArgs),
    /// Evaluate several series and compare their convergence.
    Compare(CompareArgs),
    /// Check identities against the reference pi.
    Verify(VerifyArgs),
    /// List every series and identity with its convergence class.
    Catalog,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Series name (see `picubed catalog`).
    #[arg(long, conflicts_with = "x", required_unless_present = "x")]
    series: Option<String>,
    /// Abscissa p/q of the general bilateral series.
    #[arg(long)]
    x: Option<String>,
    #[arg(long, default_value_t = 12)]
    digits: u32,
    /// Working precision in decimal digits (default: digits + 5).
    #[arg(long)]
    precision: Option<u64>,
    #[arg(long)]
    parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long, default_value_t = 10)]
    digits: u32,
    /// Comma-separated series names (default: the fixed catalog).
    #[arg(long, value_delimiter = ',')]
    series: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    output: OutputFormat,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    parallel: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Identity name or `all`.
    #[arg(long, default_value = "all")]
    identity: String,
    #[arg(long, default_value_t = 15)]
    digits: u32,
    #[arg(long)]
    parallel: bool,
}

/// Failure of a subcommand, carrying its exit code and message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parse `args` (program name first) and run the chosen subcommand.
/// `budget_var` is the value of [`BUDGET_ENV`], if set.
pub fn run<I, T>(args: I, budget_var: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                return EXIT_USAGE;
            }
            let _ = out.write_all(text.as_bytes());
            return EXIT_OK;
        }
    };
    let result = term_budget(budget_var).and_then(|budget| match cli.command {
        Command::Eval(a) => cmd_eval(&a, budget, out),
        Command::Compare(a) => cmd_compare(&a, budget, out),
        Command::Verify(a) => cmd_verify(&a, budget, out),
        Command::Catalog => cmd_catalog(out),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn term_budget(var: Option<&str>) -> Result<u64, Failure> {
    match var {
        None => Ok(DEFAULT_TERM_BUDGET),
        Some(v) => match v.trim().parse::<u64>() {
            Ok(b) if b > 0 => Ok(b),
            _ => Err(Failure::usage(format!(
                "{BUDGET_ENV} must be a positive integer, got '{v}'"
            ))),
        },
    }
}

fn check_digits(digits: u32) -> Result<(), Failure> {
    if digits == 0 {
        return Err(Failure::usage("--digits must be at least 1"));
    }
    Ok(())
}

fn context(digits: u32, precision: Option<u64>) -> Result<PrecCtx, Failure> {
    Ok(mk_context(precision.unwrap_or(digits as u64 + 5))?)
}

fn options(budget: u64, parallel: bool) -> EvalOptions {
    EvalOptions {
        term_budget: budget,
        parallel,
    }
}

fn parse_series(name: &str) -> Result<SeriesId, Failure> {
    Ok(name.trim().parse::<SeriesId>()?)
}

fn io_failure(what: &str, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_OUTPUT,
        message: format!("cannot write {what}: {e}"),
    }
}

fn cmd_eval(a: &EvalArgs, budget: u64, out: &mut dyn Write) -> Result<i32, Failure> {
    check_digits(a.digits)?;
    let id = match (&a.series, &a.x) {
        (Some(name), _) => parse_series(name)?,
        (None, Some(x)) => SeriesId::euler(parse_rat(x)?)?,
        (None, None) => return Err(Failure::usage("one of --series or --x is required")),
    };
    let ctx = context(a.digits, a.precision)?;
    let r = eval_pi3_with(&id, a.digits, &ctx, &options(budget, a.parallel))?;
    let text = format!(
        "series: {}\ntarget: {}\nvalue: {}\nterms_used: {}\nerror_bound: {}\nachieved_digits: {}\n",
        id,
        id.def().target.label(),
        to_sig_digits(&r.value, a.digits as usize),
        r.terms_used,
        to_scientific(&r.error_bound, 3),
        r.achieved_digits
    );
    out.write_all(text.as_bytes())
        .map_err(|e| io_failure("standard output", e))?;
    Ok(EXIT_OK)
}

/// One row of the convergence comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub series_id: String,
    pub target: String,
    pub requested_digits: u32,
    /// `None` when the evaluation failed (reported as `NA`).
    pub achieved_digits: Option<u32>,
    pub terms_used: Option<u64>,
    pub value_20: String,
    pub error_bound: String,
    pub uses_reference_pi: bool,
}

impl ComparisonRow {
    fn new(id: &SeriesId, digits: u32, r: Option<&EvalResult>) -> Self {
        let na = || "NA".to_string();
        ComparisonRow {
            series_id: id.name(),
            target: id.def().target.label().to_string(),
            requested_digits: digits,
            achieved_digits: r.map(|r| r.achieved_digits),
            terms_used: r.map(|r| r.terms_used),
            value_20: r.map_or_else(na, |r| to_sig_digits(&r.value, 20)),
            error_bound: r.map_or_else(na, |r| to_scientific(&r.error_bound, 3)),
            uses_reference_pi: series_uses_reference_pi(id),
        }
    }

    fn fields(&self) -> [String; 8] {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "NA".into());
        [
            self.series_id.clone(),
            self.target.clone(),
            self.requested_digits.to_string(),
            opt(self.achieved_digits.map(|d| d.to_string())),
            opt(self.terms_used.map(|t| t.to_string())),
            self.value_20.clone(),
            self.error_bound.clone(),
            self.uses_reference_pi.to_string(),
        ]
    }
}

fn series_uses_reference_pi(id: &SeriesId) -> bool {
    matches!(id, SeriesId::EulerBilateral(_))
}

/// Evaluate every series in `ids` and return the rows sorted by terms used
/// (failed rows last), ties broken by name.
pub fn compare_rows(
    ids: &[SeriesId],
    digits: u32,
    ctx: &PrecCtx,
    opts: &EvalOptions,
) -> Result<Vec<ComparisonRow>, Error> {
    let mut rows = Vec::with_capacity(ids.len());
    for id in ids {
        let row = match eval_pi3_with(id, digits, ctx, opts) {
            Ok(r) => ComparisonRow::new(id, digits, Some(&r)),
            Err(Error::BudgetExceeded { .. }) => ComparisonRow::new(id, digits, None),
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    rows.sort_by(|a, b| {
        let key = |r: &ComparisonRow| r.terms_used.unwrap_or(u64::MAX);
        key(a).cmp(&key(b)).then_with(|| a.series_id.cmp(&b.series_id))
    });
    Ok(rows)
}

pub fn render_csv(rows: &[ComparisonRow]) -> String {
    let mut s = String::new();
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.fields().join(","));
        s.push('\n');
    }
    s
}

pub fn render_table(rows: &[ComparisonRow]) -> String {
    let header: Vec<String> = CSV_HEADER.split(',').map(str::to_string).collect();
    let body: Vec<Vec<String>> = rows.iter().map(|r| r.fields().to_vec()).collect();
    aligned(&header, &body)
}

fn aligned(header: &[String], body: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut s = String::new();
    for row in std::iter::once(header).chain(body.iter().map(|r| r.as_slice())) {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        let _ = writeln!(s, "{}", line.join("  ").trim_end());
    }
    s
}

fn cmd_compare(a: &CompareArgs, budget: u64, out: &mut dyn Write) -> Result<i32, Failure> {
    check_digits(a.digits)?;
    let ids: Vec<SeriesId> = match &a.series {
        Some(names) => names.iter().map(|n| parse_series(n)).collect::<Result<_, _>>()?,
        None => SeriesId::fixed().to_vec(),
    };
    if ids.is_empty() {
        return Err(Failure::usage("--series lists no series"));
    }
    let ctx = context(a.digits, None)?;
    let rows = compare_rows(&ids, a.digits, &ctx, &options(budget, a.parallel))?;
    let text = match a.output {
        OutputFormat::Csv => render_csv(&rows),
        OutputFormat::Table => render_table(&rows),
    };
    match &a.out {
        Some(path) => {
            std::fs::write(path, text.as_bytes())
                .map_err(|e| io_failure(&path.display().to_string(), e))?;
        }
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| io_failure("standard output", e))?,
    }
    if rows.iter().any(|r| r.terms_used.is_none()) {
        return Ok(EXIT_BUDGET);
    }
    Ok(EXIT_OK)
}

fn verify_status(r: &Report) -> &'static str {
    if r.id.expected_to_fail() {
        if r.pass {
            "pass (unexpected)"
        } else {
            "expected-fail (paper typo)"
        }
    } else if r.pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn cmd_verify(a: &VerifyArgs, budget: u64, out: &mut dyn Write) -> Result<i32, Failure> {
    check_digits(a.digits)?;
    let ids = if a.identity == "all" {
        IdentityId::suite()
    } else {
        vec![a.identity.parse::<IdentityId>()?]
    };
    let ctx = context(a.digits, None)?;
    let opts = options(budget, a.parallel);
    let header: Vec<String> = [
        "identity",
        "status",
        "abs_diff",
        "terms",
        "certified_digits",
        "uses_reference_pi",
    ]
    .into_iter()
    .map(str::to_string)
    .collect();
    let mut body = Vec::new();
    let mut failed = false;
    for id in ids {
        let r = verify_identity_with(id, a.digits, &ctx, &opts)?;
        if !r.pass && !id.expected_to_fail() {
            failed = true;
        }
        body.push(vec![
            id.name(),
            verify_status(&r).to_string(),
            to_scientific(&r.abs_diff, 3),
            r.terms_used.to_string(),
            r.certified_digits.to_string(),
            r.uses_reference_pi.to_string(),
        ]);
    }
    out.write_all(aligned(&header, &body).as_bytes())
        .map_err(|e| io_failure("standard output", e))?;
    Ok(if failed { EXIT_VERIFY } else { EXIT_OK })
}

/// Static metadata shown by `picubed catalog`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub kind: &'static str,
    pub name: String,
    pub tag: &'static str,
    pub class: &'static str,
    pub uses_reference_pi: bool,
}

const BILATERAL: &str = "bilateral O(N^-3)";
const ALTERNATING: &str = "alternating";
const GEOMETRIC: &str = "geometric-ratio";
const EXPONENTIAL: &str = "exponential";
const CLOSED_FORM: &str = "closed-form";

pub fn catalog_entries() -> Vec<CatalogEntry> {
    let mut v = Vec::new();
    let series = std::iter::once(SeriesId::EulerBilateral(picubed_core::goldfield::rat(1, 5)))
        .chain(SeriesId::fixed());
    for id in series {
        let (tag, class) = match id {
            SeriesId::EulerBilateral(_) => ("Eq. (10)", BILATERAL),
            SeriesId::GoldenFifth => ("Eq. (16)", BILATERAL),
            SeriesId::GoldenTenth => ("Eq. (21)", BILATERAL),
            SeriesId::Quarter => ("footnote", BILATERAL),
            SeriesId::AltOddCubesCorrected | SeriesId::AltOddCubesAsPrinted => {
                ("Eq. (1)", ALTERNATING)
            }
            SeriesId::CentralBinomial => ("Eq. (2)", GEOMETRIC),
            SeriesId::PilehroodApery => ("Eq. (3)", GEOMETRIC),
            SeriesId::SunHarmonic => ("Eq. (4)", GEOMETRIC),
        };
        let name = match id {
            SeriesId::EulerBilateral(_) => "euler-<p/q>".to_string(),
            _ => id.name(),
        };
        v.push(CatalogEntry {
            kind: "series",
            name,
            tag,
            class,
            uses_reference_pi: series_uses_reference_pi(&id),
        });
    }
    for id in IdentityId::variants() {
        let (tag, class) = match id {
            IdentityId::Eq2CentralBinomial => ("Eq. (2)", GEOMETRIC),
            IdentityId::Eq4SunHarmonic => ("Eq. (4)", GEOMETRIC),
            IdentityId::GuptaFamily(_) => ("Eq. (6)", ALTERNATING),
            IdentityId::PlouffePi => ("Eq. (8)", EXPONENTIAL),
            IdentityId::PlouffePi3 => ("Eq. (9)", EXPONENTIAL),
            IdentityId::Eq1AsPrinted | IdentityId::Eq1Corrected => ("Eq. (1)", ALTERNATING),
            IdentityId::CoeffFifth => ("Eq. (16)", CLOSED_FORM),
            IdentityId::CoeffTenth => ("Eq. (21)", CLOSED_FORM),
        };
        let name = match id {
            IdentityId::GuptaFamily(_) => "gupta-<k>".to_string(),
            _ => id.name(),
        };
        v.push(CatalogEntry {
            kind: "identity",
            name,
            tag,
            class,
            uses_reference_pi: id.uses_reference_pi(),
        });
    }
    v
}

pub fn render_catalog() -> String {
    let header: Vec<String> = ["kind", "name", "tag", "class", "uses_reference_pi"]
        .into_iter()
        .map(str::to_string)
        .collect();
    let body: Vec<Vec<String>> = catalog_entries()
        .into_iter()
        .map(|e| {
            vec![
                e.kind.to_string(),
                e.name,
                e.tag.to_string(),
                e.class.to_string(),
                e.uses_reference_pi.to_string(),
            ]
        })
        .collect();
    aligned(&header, &body)
}

fn cmd_catalog(out: &mut dyn Write) -> Result<i32, Failure> {
    out.write_all(render_catalog().as_bytes())
        .map_err(|e| io_failure("standard output", e))?;
    Ok(EXIT_OK)
}
