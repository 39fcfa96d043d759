//! Command-line front end. Every command writes to caller-supplied streams so
//! it can be driven from tests; the binary only wires up stdio.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{self, CaseTag};
use crate::model::{Family, GroupSpec};
use crate::oracle::{self, OracleConfig};
use crate::recursion;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "maxgrowth", version, about = "Count maximal subgroups of index n in G_k and H_k")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Gk,
    Hk,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Gk => Family::Gk,
            FamilyArg::Hk => Family::Hk,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Recursion,
    Oracle,
}

impl Method {
    fn as_str(&self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Recursion => "recursion",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print m_n for 2 <= n <= nmax.
    Table {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        nmax: i64,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "formula,recursion")]
        methods: Vec<Method>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Cross-check formula, recursion and oracle over a range of k.
    Verify {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Inclusive range `a..b`, or a single value.
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        nmax: i64,
        #[arg(long, default_value_t = 0)]
        oracle_nmax: i64,
    },
    /// Look for a prime separating H_i from H_j.
    Noniso {
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Exact and empirical degree of maximal subgroup growth.
    Mdeg {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 10_000)]
        limit: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: u64,
    pub count: u64,
    pub case: CaseTag,
    pub method: Method,
}

pub fn parse_k_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let s = s.trim();
    // skip a leading sign so "-4..6" splits at the right place
    let split = s.get(1..).and_then(|rest| rest.find("..")).map(|i| i + 1);
    let (lo, hi) = match split {
        Some(i) => (&s[..i], &s[i + 2..]),
        None => (s, s),
    };
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

enum Outcome {
    Value(u64),
    Skipped(String),
}

fn run_method(spec: &GroupSpec, method: Method, n: i64, config: &OracleConfig) -> Result<Outcome> {
    let value = match method {
        Method::Formula => formula::max_count(spec, n).map(|v| v.count),
        Method::Recursion => match spec.family() {
            Family::Gk => recursion::recursive_gk(spec.k(), n),
            Family::Hk => recursion::recursive_hk(spec.k(), n),
        },
        Method::Oracle => {
            if n as usize > config.max_index {
                return Ok(Outcome::Skipped(format!("index {n} above oracle cap {}", config.max_index)));
            }
            oracle::oracle_max_count(&spec.presentation(), n as usize, config)
        }
    };
    match value {
        Ok(v) => Ok(Outcome::Value(v)),
        Err(e @ (Error::BudgetExhausted(_) | Error::BoundExceeded { .. })) => Ok(Outcome::Skipped(e.to_string())),
        Err(e) => Err(e),
    }
}

fn usage(err: &mut dyn Write, msg: &str) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    EXIT_USAGE
}

pub fn cmd_table(
    spec: &GroupSpec,
    n_max: i64,
    methods: &[Method],
    format: TableFormat,
    config: &OracleConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    if format == TableFormat::Csv {
        writeln!(out, "n,count,case,method").map_err(io_error)?;
    }
    let mut disagreements = 0;
    for n in 2..=n_max {
        let case = formula::max_count(spec, n)?.case;
        let mut seen: Option<u64> = None;
        for &method in &methods {
            let count = match run_method(spec, method, n, config)? {
                Outcome::Value(v) => v,
                Outcome::Skipped(why) => {
                    let _ = writeln!(err, "{spec} n={n} {}: SKIPPED ({why})", method.as_str());
                    continue;
                }
            };
            if seen.is_some_and(|s| s != count) {
                disagreements += 1;
                let _ = writeln!(err, "{spec} n={n}: {} gives {count}, earlier method gave {}", method.as_str(), seen.unwrap());
            }
            seen.get_or_insert(count);
            let row = TableRow { n: n as u64, count, case, method };
            match format {
                TableFormat::Csv => writeln!(out, "{},{},{},{}", row.n, row.count, case.as_str(), method.as_str()),
                TableFormat::Jsonl => writeln!(out, "{}", serde_json::to_string(&row).expect("row serializes")),
            }
            .map_err(io_error)?;
        }
    }
    Ok(if disagreements == 0 { EXIT_OK } else { EXIT_DISAGREE })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySummary {
    pub cells: usize,
    pub passed: usize,
    pub failed: usize,
    pub oracle_run: usize,
    pub skipped: usize,
}

pub fn cmd_verify(
    family: Family,
    k_range: (i64, i64),
    n_max: i64,
    oracle_n_max: i64,
    config: &OracleConfig,
    out: &mut dyn Write,
) -> Result<(i32, VerifySummary)> {
    let specs: Vec<GroupSpec> = (k_range.0..=k_range.1)
        .map(|k| GroupSpec::new(family, k))
        .collect::<Result<_>>()?;
    let cells: Vec<(GroupSpec, i64)> = specs.iter().flat_map(|s| (2..=n_max).map(move |n| (*s, n))).collect();
    let lines: Vec<(String, bool, bool, usize)> = cells
        .par_iter()
        .map(|&(spec, n)| -> Result<(String, bool, bool, usize)> {
            let mut line = format!("{} k={} n={n}", family, spec.k());
            let mut values = Vec::new();
            let mut skipped = 0;
            let mut oracle_ran = false;
            let mut methods = vec![Method::Formula, Method::Recursion];
            if n <= oracle_n_max {
                methods.push(Method::Oracle);
            }
            for m in methods {
                match run_method(&spec, m, n, config)? {
                    Outcome::Value(v) => {
                        let _ = write!(line, " {}={v}", m.as_str());
                        oracle_ran |= m == Method::Oracle;
                        values.push(v);
                    }
                    Outcome::Skipped(_) => {
                        let _ = write!(line, " {}=SKIPPED", m.as_str());
                        skipped += 1;
                    }
                }
            }
            let pass = values.windows(2).all(|w| w[0] == w[1]);
            line.push_str(if pass { " PASS" } else { " FAIL" });
            Ok((line, pass, oracle_ran, skipped))
        })
        .collect::<Result<_>>()?;
    let mut summary = VerifySummary { cells: lines.len(), passed: 0, failed: 0, oracle_run: 0, skipped: 0 };
    for (line, pass, oracle_ran, skipped) in &lines {
        writeln!(out, "{line}").map_err(io_error)?;
        if *pass {
            summary.passed += 1;
        } else {
            summary.failed += 1;
        }
        summary.oracle_run += usize::from(*oracle_ran);
        summary.skipped += skipped;
    }
    writeln!(
        out,
        "summary: cells={} pass={} fail={} oracle_cells={} skipped={}",
        summary.cells, summary.passed, summary.failed, summary.oracle_run, summary.skipped
    )
    .map_err(io_error)?;
    let code = if summary.failed == 0 { EXIT_OK } else { EXIT_DISAGREE };
    Ok((code, summary))
}

pub fn cmd_noniso(i: i64, j: i64, format: TextFormat, out: &mut dyn Write) -> Result<i32> {
    let cert = formula::noniso_certificate(i, j)?;
    let text = match (format, cert) {
        (TextFormat::Text, Some(c)) => format!(
            "certificate: p={} side={} m_p(H_{i})={} m_p(H_{j})={}",
            c.prime,
            match c.side {
                formula::Side::Minus => "minus",
                formula::Side::Plus => "plus",
            },
            c.m_i,
            c.m_j
        ),
        (TextFormat::Text, None) => "no certificate from this criterion".to_string(),
        (TextFormat::Json, Some(c)) => serde_json::json!({
            "i": i, "j": j, "prime": c.prime, "side": c.side, "m_i": c.m_i, "m_j": c.m_j,
        })
        .to_string(),
        (TextFormat::Json, None) => serde_json::json!({ "i": i, "j": j, "certificate": null }).to_string(),
    };
    writeln!(out, "{text}").map_err(io_error)?;
    Ok(EXIT_OK)
}

pub fn cmd_mdeg(spec: &GroupSpec, sample_limit: u64, out: &mut dyn Write) -> Result<i32> {
    let v = formula::mdeg(spec, sample_limit)?;
    writeln!(
        out,
        "group={spec} exact={} empirical_slope={:.6} primes_in=[{},{}]",
        v.exact, v.empirical_slope, v.sample_lo, v.sample_hi
    )
    .map_err(io_error)?;
    Ok(EXIT_OK)
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidParameter(format!("write failed: {e}"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let config = OracleConfig::from_env();
    let result = match cli.command {
        Command::Table { family, k, nmax, methods, format } => {
            if nmax < 2 {
                return usage(err, "--nmax must be at least 2");
            }
            match GroupSpec::new(family.into(), k) {
                Ok(spec) => cmd_table(&spec, nmax, &methods, format, &config, out, err),
                Err(e) => return usage(err, &e.to_string()),
            }
        }
        Command::Verify { family, k, nmax, oracle_nmax } => {
            let range = match parse_k_range(&k) {
                Ok(r) => r,
                Err(msg) => return usage(err, &msg),
            };
            if nmax < 2 {
                return usage(err, "--nmax must be at least 2");
            }
            if family == FamilyArg::Gk && range.0 < 1 {
                return usage(err, "G_k needs k >= 1");
            }
            cmd_verify(family.into(), range, nmax, oracle_nmax, &config, out).map(|(code, _)| code)
        }
        Command::Noniso { i, j, format } => cmd_noniso(i, j, format, out),
        Command::Mdeg { family, k, limit } => {
            if limit < 100 {
                return usage(err, "--limit must be at least 100");
            }
            match GroupSpec::new(family.into(), k) {
                Ok(spec) => cmd_mdeg(&spec, limit, out),
                Err(e) => return usage(err, &e.to_string()),
            }
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
