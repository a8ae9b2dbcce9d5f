//! The `credal` command-line tool.
//!
//! Exit codes: 0 on success (for `check`, when every applicable condition
//! holds), 1 on usage or input errors, 2 when an operator refuses its input,
//! 3 when a checked condition fails.

pub mod files;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::adjust::{adjust, adjust_pmf, AdjustOptions, Evidence, Operator};
use crate::credal::{conditional_envelopes, envelope, CredalEvidence, CredalSet};
use crate::kinematics::{check_cpk, check_ick, check_ik, check_km, check_pk, Report};
use crate::model::{parse_query, Formula};
use crate::rational::{format_exact, format_fixed};
use crate::{Error, Rational};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_operator_precondition() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "credal",
    version,
    about = "Belief adjustment over sharp and credal probability models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pk,
    Cpk,
    Ik,
    Ick,
    Km,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Adjust a model by evidence and print envelopes of the queries.
    Adjust {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        evidence: PathBuf,
        #[arg(long, value_parser = parse_operator)]
        op: Operator,
        /// Event such as `Z=z` or `Z=z given X=x_B`; repeatable.
        #[arg(long)]
        query: Vec<String>,
        /// Write the adjusted model here, as extreme points.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Credal Adams' imaging with the belief and images ranging jointly.
        #[arg(long)]
        coupled: bool,
    },
    /// Adjust a model and check a family of conditions on the result.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        evidence: PathBuf,
        #[arg(long, value_parser = parse_operator)]
        op: Operator,
        #[arg(long, value_enum)]
        family: Family,
        /// Demand equality instead of inclusion in IK1 and ICK1.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        coupled: bool,
        /// Second evidence file for the conjunction postulates KM5 and KM6.
        #[arg(long)]
        aux_evidence: Option<PathBuf>,
    },
    /// Print lower and upper envelopes of queries on a model.
    Envelope {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, required = true)]
        query: Vec<String>,
    },
}

fn parse_operator(s: &str) -> Result<Operator, String> {
    s.parse()
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command) -> Result<(String, i32), CliError> {
    match command {
        Command::Adjust {
            model,
            evidence,
            op,
            query,
            out,
            coupled,
        } => {
            let k = files::load_model(model)?;
            let ev = files::load_evidence(evidence, k.space())?;
            let queries = parse_queries(&k, query)?;
            let result = adjust(&k, &ev, *op, AdjustOptions { coupled: *coupled })?;
            if let Some(path) = out {
                std::fs::write(path, files::model_to_toml(&result)).map_err(|e| {
                    CliError::Usage(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            let mut text = format!("{op}: {} extreme point(s)\n", result.len());
            text.push_str(&envelope_table(&result, &queries));
            Ok((text, 0))
        }
        Command::Check {
            model,
            evidence,
            op,
            family,
            strict,
            coupled,
            aux_evidence,
        } => {
            let k = files::load_model(model)?;
            let ev = files::load_evidence(evidence, k.space())?;
            let aux = aux_evidence
                .as_ref()
                .map(|p| files::load_evidence(p, k.space()))
                .transpose()?;
            let opts = AdjustOptions { coupled: *coupled };
            let reports = check(&k, &ev, *op, *family, *strict, opts, aux.as_ref())?;
            let mut text = String::new();
            let many = reports.len() > 1;
            for (i, report) in reports.iter().enumerate() {
                if many {
                    let _ = writeln!(text, "extreme point {}:", i + 1);
                }
                text.push_str(&report.to_string());
            }
            let ok = reports.iter().all(Report::all_hold);
            text.push_str(if ok {
                "result: all applicable conditions hold\n"
            } else {
                "result: some condition fails\n"
            });
            Ok((text, if ok { 0 } else { 3 }))
        }
        Command::Envelope { model, query } => {
            let k = files::load_model(model)?;
            let queries = parse_queries(&k, query)?;
            Ok((envelope_table(&k, &queries), 0))
        }
    }
}

fn check(
    k: &CredalSet,
    ev: &Evidence,
    op: Operator,
    family: Family,
    strict: bool,
    opts: AdjustOptions,
    aux: Option<&Evidence>,
) -> Result<Vec<Report>, CliError> {
    let mismatch = |family: &str| {
        CliError::Core(Error::InvalidEvidence(format!(
            "the {family} conditions need {} evidence",
            match family {
                "CPK" | "ICK" => "conditional",
                "PK" => "sharp marginal",
                _ => "marginal or credal-marginal",
            }
        )))
    };
    match family {
        Family::Pk => {
            let m = ev.as_marginal().ok_or_else(|| mismatch("PK"))?;
            // Sharp conditions are checked on each extreme point.
            k.extremes()
                .iter()
                .map(|p| Ok(check_pk(p, &adjust_pmf(p, ev, op)?, &m)?))
                .collect()
        }
        Family::Cpk => {
            let Evidence::Conditional(c) = ev else {
                return Err(mismatch("CPK"));
            };
            k.extremes()
                .iter()
                .map(|p| Ok(check_cpk(p, &adjust_pmf(p, ev, op)?, c)?))
                .collect()
        }
        Family::Ik => {
            let c = match ev {
                Evidence::Marginal(m) => CredalEvidence::sharp(m),
                Evidence::Credal(c) => c.clone(),
                Evidence::Conditional(_) => return Err(mismatch("IK")),
            };
            let after = adjust(k, ev, op, opts)?;
            Ok(vec![check_ik(k, &after, &c, strict)?])
        }
        Family::Ick => {
            let Evidence::Conditional(c) = ev else {
                return Err(mismatch("ICK"));
            };
            let after = adjust(k, ev, op, opts)?;
            Ok(vec![check_ick(k, &after, c, strict)?])
        }
        Family::Km => Ok(vec![check_km(k, ev, op, opts, aux)?]),
    }
}

type Query = (String, Formula, Option<Formula>);

fn parse_queries(k: &CredalSet, queries: &[String]) -> Result<Vec<Query>, CliError> {
    queries
        .iter()
        .map(|q| {
            let (target, given) = parse_query(q, k.space())?;
            let label = match &given {
                Some(g) => format!(
                    "P({} | {})",
                    target.display(k.space()),
                    g.display(k.space())
                ),
                None => format!("P({})", target.display(k.space())),
            };
            Ok((label, target, given))
        })
        .collect()
}

fn both(v: &Rational) -> String {
    format!("{} ({})", format_exact(v), format_fixed(v, 4))
}

/// One row per query: lower and upper envelopes, exact and to 4 decimals.
pub fn envelope_table(k: &CredalSet, queries: &[Query]) -> String {
    let rows: Vec<(String, String, String)> = queries
        .iter()
        .map(|(label, target, given)| {
            let bounds = match given {
                None => Ok(envelope(k, target)),
                Some(g) => conditional_envelopes(k, target, g),
            };
            match bounds {
                Ok((lo, hi)) => (label.clone(), both(&lo), both(&hi)),
                Err(_) => (label.clone(), "undefined".into(), "undefined".into()),
            }
        })
        .collect();
    if rows.is_empty() {
        return String::new();
    }
    let w0 = rows
        .iter()
        .map(|r| r.0.len())
        .max()
        .unwrap_or(0)
        .max("query".len());
    let w1 = rows
        .iter()
        .map(|r| r.1.len())
        .max()
        .unwrap_or(0)
        .max("lower".len());
    let mut text = format!("{:<w0$}  {:<w1$}  upper\n", "query", "lower");
    for (q, lo, hi) in rows {
        let _ = writeln!(text, "{q:<w0$}  {lo:<w1$}  {hi}");
    }
    text
}
