//! Command-line surface. [`run`] parses arguments, writes to the given
//! streams and returns the process exit code: 0 on success, 1 when a
//! verification finds unexplained mismatches, 2 on usage or input errors.

pub mod bench;
pub mod config;
pub mod suites;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::algebra::{odd_primes_up_to, FpPolynomial, OddPrime};
use crate::closedform::{evaluate, evaluate_closed, family_sum, pin_conventions, point_count, FamilyQuery, Strategy};
use crate::cm::ConventionTable;
use crate::families::FamilyId;
use crate::hasse::{factor_counts, hasse_eval, is_supersingular, legendre_form_sum, squarefree_check};
use crate::oracle::{char_sum_direct, Params, VerificationReport};
use crate::value::SumValue;

use config::{resolve, Format, Options, Resolved};
use suites::{run_suite, Suite, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "charsum", version, about = "Quadratic character sums over prime fields in closed form")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate S(f) for a family member or explicit coefficients
    Eval {
        /// Coefficients c0,c1,... in ascending order instead of a family
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<i64>>,
    },
    /// Count points on y^2 = f(x) for a family member
    Count,
    /// Compare closed forms with direct sums over a range of primes
    Verify {
        #[arg(long, value_enum)]
        suite: Vec<SuiteArg>,
        /// Re-derive the sign-rule table before verifying
        #[arg(long)]
        pin_conventions: bool,
        /// Where to write the pinned table
        #[arg(long, default_value = "conventions.json")]
        conventions_out: PathBuf,
        /// Write the full report(s) here, in --format (json when text)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hasse invariant statistics per prime, or H(beta) at one prime
    Hasse,
    /// Time closed forms against direct summation
    Bench {
        /// Largest bit size of p
        #[arg(long, default_value_t = 24)]
        pbits: u32,
        /// Direct sums predicted to take longer are extrapolated
        #[arg(long, default_value_t = 2000)]
        budget_ms: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SuiteArg {
    All,
    Quadratic,
    CmCubic,
    Derived,
    EvenSplit,
    SplitQuartic,
    HasseSign,
    HasseFactors,
    Squarefree,
    Jacobsthal,
    PowerSum,
    Weil,
    Identities,
}

impl SuiteArg {
    fn expand(self) -> Vec<Suite> {
        match self {
            SuiteArg::All => Suite::ALL.to_vec(),
            SuiteArg::Quadratic => vec![Suite::Quadratic],
            SuiteArg::CmCubic => vec![Suite::CmCubic],
            SuiteArg::Derived => vec![Suite::Derived],
            SuiteArg::EvenSplit => vec![Suite::EvenSplit],
            SuiteArg::SplitQuartic => vec![Suite::SplitQuartic],
            SuiteArg::HasseSign => vec![Suite::HasseSign],
            SuiteArg::HasseFactors => vec![Suite::HasseFactors],
            SuiteArg::Squarefree => vec![Suite::Squarefree],
            SuiteArg::Jacobsthal => vec![Suite::Jacobsthal],
            SuiteArg::PowerSum => vec![Suite::PowerSum],
            SuiteArg::Weil => vec![Suite::Weil],
            SuiteArg::Identities => vec![Suite::Identities],
        }
    }
}

enum Failure {
    Usage(String),
    Mismatch,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parse `args` (program name first) and execute.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter("CHARSUM_LOG")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    let result = resolve(&cli.opts).map_err(Failure::Usage).and_then(|cfg| dispatch(&cli.command, &cfg, out, err));
    match result {
        Ok(()) => 0,
        Err(Failure::Mismatch) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: &Command, cfg: &Resolved, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Eval { coeffs } => cmd_eval(cfg, coeffs.as_deref(), out),
        Command::Count => cmd_count(cfg, out),
        Command::Verify { suite, pin_conventions, conventions_out, out: path } => {
            cmd_verify(cfg, suite, *pin_conventions, conventions_out, path.as_ref(), out, err)
        }
        Command::Hasse => cmd_hasse(cfg, out),
        Command::Bench { pbits, budget_ms } => cmd_bench(cfg, *pbits, *budget_ms, out),
    }
}

fn conventions(cfg: &Resolved) -> std::result::Result<ConventionTable, Failure> {
    match &cfg.conventions {
        None => Ok(ConventionTable::shipped()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(ConventionTable::from_json(&text)?)
        }
    }
}

fn prime(cfg: &Resolved) -> std::result::Result<OddPrime, Failure> {
    let p = cfg.p.ok_or_else(|| Failure::Usage("--p is required".into()))?;
    Ok(OddPrime::new(p)?)
}

fn family(cfg: &Resolved) -> std::result::Result<FamilyId, Failure> {
    let name = cfg.family.as_deref().ok_or_else(|| Failure::Usage("--family is required".into()))?;
    let name = match (name, cfg.n) {
        ("f" | "g", Some(n)) => format!("{name}{n}"),
        _ => name.to_string(),
    };
    Ok(name.parse()?)
}

fn query(cfg: &Resolved) -> std::result::Result<FamilyQuery, Failure> {
    Ok(FamilyQuery { family: family(cfg)?, a: cfg.a, beta: cfg.beta, k: cfg.k, c: cfg.c, d: cfg.d })
}

/// The parameters a family actually reads.
fn query_params(q: &FamilyQuery) -> Params {
    let pairs: Vec<(&str, i64)> = match q.family {
        FamilyId::Cubic(_) | FamilyId::Derived(_) => vec![("a", q.a)],
        FamilyId::Legendre => vec![("beta", q.beta)],
        FamilyId::Newton => vec![("k", q.k), ("beta", q.beta)],
        FamilyId::Edwards => vec![("c", q.c), ("d", q.d)],
    };
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Serialize)]
struct EvalOutput {
    subject: String,
    p: u64,
    params: Params,
    #[serde(flatten)]
    sum: SumValue,
}

fn params_text(params: &Params) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn render_eval(o: &EvalOutput, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(o).expect("serializable")),
        Format::Csv => {
            writeln!(out, "subject,p,params,value,method,residue_only")?;
            let params: Vec<String> = o.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(out, "{},{},{},{},{},{}", o.subject, o.p, params.join(";"), o.sum.value, o.sum.method, o.sum.residue_only)
        }
        Format::Text => {
            writeln!(out, "{} {} over F_{}", o.subject, params_text(&o.params), o.p)?;
            let modp = if o.sum.residue_only { " (mod p only)" } else { "" };
            writeln!(out, "S = {}{modp}", o.sum.value)?;
            writeln!(out, "method: {}", o.sum.method)?;
            for part in &o.sum.parts {
                writeln!(out, "  {} = {} [{}]", part.label, part.value, part.method)?;
            }
            for note in &o.sum.notes {
                writeln!(out, "  note: {note}")?;
            }
            Ok(())
        }
    }
}

fn cmd_eval(cfg: &Resolved, coeffs: Option<&[i64]>, out: &mut dyn Write) -> Outcome {
    let p = prime(cfg)?;
    let table = conventions(cfg)?;
    let output = match coeffs {
        Some(c) => {
            let f = FpPolynomial::from_i64(p, c);
            let sum = match cfg.method {
                Strategy::Auto => evaluate(&f, &table),
                Strategy::Closed => evaluate_closed(&f, &table)?,
                Strategy::Oracle => char_sum_direct(&f),
            };
            EvalOutput { subject: f.to_string(), p: p.get(), params: Params::new(), sum }
        }
        None => {
            let q = query(cfg)?;
            let sum = family_sum(&q, p, cfg.method, &table)?;
            EvalOutput { subject: q.family.to_string(), p: p.get(), params: query_params(&q), sum }
        }
    };
    render_eval(&output, cfg.format, out)?;
    Ok(())
}

#[derive(Serialize)]
struct CountOutput {
    family: String,
    p: u64,
    params: Params,
    affine: i64,
    with_infinity: i64,
    sum: SumValue,
}

fn cmd_count(cfg: &Resolved, out: &mut dyn Write) -> Outcome {
    let p = prime(cfg)?;
    let q = query(cfg)?;
    let pc = point_count(&q, p, cfg.method, &conventions(cfg)?)?;
    let o = CountOutput {
        family: q.family.to_string(),
        p: p.get(),
        params: query_params(&q),
        affine: pc.affine,
        with_infinity: pc.with_infinity,
        sum: pc.sum,
    };
    match cfg.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o).expect("serializable"))?,
        Format::Csv => {
            writeln!(out, "family,p,params,affine,with_infinity,sum,method")?;
            let params: Vec<String> = o.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(out, "{},{},{},{},{},{},{}", o.family, o.p, params.join(";"), o.affine, o.with_infinity, o.sum.value, o.sum.method)?;
        }
        Format::Text => {
            writeln!(out, "{} {} over F_{}", o.family, params_text(&o.params), o.p)?;
            writeln!(out, "affine points: {} = p + S", o.affine)?;
            writeln!(out, "with one point at infinity: {}", o.with_infinity)?;
            writeln!(out, "S = {} [{}]", o.sum.value, o.sum.method)?;
        }
    }
    Ok(())
}

fn cmd_verify(
    cfg: &Resolved,
    suites: &[SuiteArg],
    pin: bool,
    conventions_out: &PathBuf,
    report_path: Option<&PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    if cfg.pmax > cfg.pmax_ceiling {
        return Err(Failure::Usage(format!("--pmax {} exceeds the ceiling {}", cfg.pmax, cfg.pmax_ceiling)));
    }
    let mut table = conventions(cfg)?;
    if pin {
        let (fresh, records) = pin_conventions(cfg.pmax, &[1, 2, 3], cfg.jobs);
        for r in &records {
            writeln!(
                out,
                "pinned {}: {} ({} samples, {} mismatches)",
                r.family, r.entry.selector, r.samples, r.entry.mismatches
            )?;
        }
        std::fs::write(conventions_out, fresh.to_json() + "\n").map_err(|e| format!("{}: {e}", conventions_out.display()))?;
        writeln!(out, "wrote {}", conventions_out.display())?;
        table = fresh;
    }
    let mut chosen: Vec<Suite> = if suites.is_empty() && !pin {
        Suite::ALL.to_vec()
    } else {
        suites.iter().flat_map(|s| s.expand()).collect()
    };
    chosen.sort();
    chosen.dedup();
    let scfg = SuiteConfig { p_max: cfg.pmax, seed: cfg.seed, jobs: cfg.jobs, conventions: table };
    let reports: BTreeMap<&str, VerificationReport> = chosen.iter().map(|&s| (s.name(), run_suite(s, &scfg))).collect();
    for r in reports.values() {
        writeln!(out, "{} {}", if r.passed() { "PASS" } else { "FAIL" }, r.summary_line())?;
    }
    if let Some(path) = report_path {
        let body = match cfg.format {
            Format::Csv => reports.values().map(|r| r.to_csv()).collect::<Vec<_>>().join(""),
            _ if reports.len() == 1 => reports.values().next().expect("one").to_json(),
            _ => {
                let v: BTreeMap<&str, serde_json::Value> =
                    reports.iter().map(|(k, r)| (*k, serde_json::to_value(r).expect("serializable"))).collect();
                serde_json::to_string_pretty(&v).expect("serializable")
            }
        };
        std::fs::write(path, body + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let failed: Vec<&str> = reports.iter().filter(|(_, r)| !r.passed()).map(|(k, _)| *k).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        writeln!(err, "unexplained mismatches in: {}", failed.join(", "))?;
        Err(Failure::Mismatch)
    }
}

#[derive(Serialize)]
struct HasseRow {
    p: u64,
    h: u64,
    n1: u64,
    n2: u64,
    n2_all: u64,
    consistent: bool,
    squarefree: bool,
}

#[derive(Serialize)]
struct HasseAt {
    p: u64,
    beta: i64,
    h_beta: u64,
    sum: SumValue,
    supersingular: bool,
}

fn cmd_hasse(cfg: &Resolved, out: &mut dyn Write) -> Outcome {
    if let (Some(_), true) = (cfg.p, cfg.beta != 0) {
        let p = prime(cfg)?;
        let beta = p.reduce(cfg.beta);
        let row = HasseAt {
            p: p.get(),
            beta: cfg.beta,
            h_beta: hasse_eval(beta, p),
            sum: legendre_form_sum(beta, p)?,
            supersingular: is_supersingular(beta, p)?,
        };
        match cfg.format {
            Format::Csv => {
                writeln!(out, "p,beta,h_beta,sum,method,supersingular")?;
                writeln!(out, "{},{},{},{},{},{}", row.p, row.beta, row.h_beta, row.sum.value, row.sum.method, row.supersingular)?;
            }
            Format::Json => writeln!(out, "{}", serde_json::to_string(&row).expect("serializable"))?,
            Format::Text => {
                writeln!(out, "H({}) = {} mod {}", row.beta, row.h_beta, row.p)?;
                writeln!(out, "S(F_beta) = {} [{}]", row.sum.value, row.sum.method)?;
                writeln!(out, "supersingular: {}", row.supersingular)?;
            }
        }
        return Ok(());
    }
    let primes: Vec<OddPrime> = odd_primes_up_to(cfg.pmax).into_iter().filter(|p| p.get() > 3).collect();
    if cfg.format == Format::Csv {
        writeln!(out, "p,h,n1,n2,n2_all,consistent,squarefree")?;
    }
    for p in primes {
        let fc = factor_counts(p)?;
        let row = HasseRow {
            p: fc.p,
            h: fc.h,
            n1: fc.n1,
            n2: fc.n2,
            n2_all: fc.n2_all,
            consistent: fc.counts_consistent,
            squarefree: squarefree_check(p)?,
        };
        match cfg.format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(&row).expect("serializable"))?,
            _ => writeln!(out, "{},{},{},{},{},{},{}", row.p, row.h, row.n1, row.n2, row.n2_all, row.consistent, row.squarefree)?,
        }
    }
    Ok(())
}

fn cmd_bench(cfg: &Resolved, pbits: u32, budget_ms: u64, out: &mut dyn Write) -> Outcome {
    let q = query(cfg)?;
    let rows = bench::bench_family(&q, pbits, Duration::from_millis(budget_ms), &conventions(cfg)?)?;
    match cfg.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("serializable"))?,
        _ => {
            writeln!(out, "{}", bench::BenchRow::CSV_HEADER)?;
            for r in &rows {
                writeln!(out, "{}", r.to_csv())?;
            }
        }
    }
    Ok(())
}
