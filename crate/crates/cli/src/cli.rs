//! Argument parsing and the three commands. Exit codes: 0 all checks passed, 1 an identity
//! failed, 2 usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use askey_core::arith::to_fraction_string;
use askey_core::verify::{Status, Suite, SuiteOptions};
use askey_core::FamilyParams;
use clap::{Parser, Subcommand, ValueEnum};

use crate::grid::Grid;
use crate::params::ParamSet;
use crate::report::{run_one, Report};
use crate::table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "askey-finite", version, about = "Exact finite Askey-scheme polynomials and identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Orthogonality,
    Diophantine,
    Darboux,
    ShapeInvariance,
    Operators,
    All,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Source {
    /// Family code: K, H, R, dH, dqqK, qH, qK, qqK, aqK, qR, dqH, dqK.
    #[arg(long)]
    pub family: Option<String>,
    /// Inline JSON object, or a path to a JSON file. Defaults to the first grid set.
    #[arg(long)]
    pub params: Option<String>,
    /// Lattice size N when the parameters do not give one.
    #[arg(long = "size")]
    pub size: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print P_n(x) as an exact rational.
    Eval {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        x: i64,
    },
    /// Tabulate P_n(x) for n, x in 0..=N.
    Table {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run verification suites and write a report.
    Verify {
        #[arg(long = "suite", value_enum, default_value = "all")]
        suites: Vec<SuiteArg>,
        /// Restrict the grid to these families (repeatable).
        #[arg(long = "family")]
        families: Vec<String>,
        /// A single parameter set instead of the grid; needs one --family unless the JSON names it.
        #[arg(long)]
        params: Option<String>,
        #[arg(long = "size")]
        size: Option<u32>,
        /// Run parameter sets outside the admissible range, with a warning.
        #[arg(long)]
        allow_invalid: bool,
        #[arg(long = "m-max", default_value_t = 3)]
        m_max: u64,
        #[arg(long = "M-max", default_value_t = 3)]
        big_m_max: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Omit the timestamp and timings so identical inputs give identical bytes.
        #[arg(long)]
        no_timestamp: bool,
        /// Corrupt one matrix entry to exercise the failure path.
        #[arg(long, hide = true)]
        tamper: bool,
    },
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn read_params_arg(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading parameter file {arg}"))
    }
}

fn single_set(source: &Source) -> Result<ParamSet> {
    match &source.params {
        Some(arg) => ParamSet::parse_inline(&read_params_arg(arg)?, source.family.as_deref(), source.size),
        None => {
            let family = source.family.as_deref().ok_or_else(|| anyhow!("--family or --params is required"))?;
            let grid = Grid::load()?;
            let size = source.size.unwrap_or_else(|| grid.largest_size());
            let mut set = grid
                .expand(&[family.to_string()])
                .into_iter()
                .next()
                .ok_or_else(|| anyhow!("no grid set for family {family}"))?;
            set.size = size;
            Ok(set)
        }
    }
}

fn write_out(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn selected_suites(args: &[SuiteArg]) -> Vec<Suite> {
    let mut out = Vec::new();
    for a in args {
        let add: &[Suite] = match a {
            SuiteArg::All => &Suite::ALL,
            SuiteArg::Orthogonality => &[Suite::Orthogonality],
            SuiteArg::Diophantine => &[Suite::Diophantine],
            SuiteArg::Darboux => &[Suite::Darboux],
            SuiteArg::ShapeInvariance => &[Suite::ShapeInvariance],
            SuiteArg::Operators => &[Suite::Operators],
        };
        for s in add {
            if !out.contains(s) {
                out.push(*s);
            }
        }
    }
    out
}

fn run(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Eval { source, n, x } => {
            let params = single_set(&source)?.to_family_params()?;
            let v = params.eval_p(n, x)?;
            writeln!(stdout, "{}", to_fraction_string(&v))?;
            Ok(EXIT_OK)
        }
        Command::Table { source, format, output } => {
            let params = single_set(&source)?.to_family_params()?;
            let entries = table::entries(&params)?;
            let text = match format {
                Format::Csv => table::to_csv(&entries),
                Format::Json => table::to_json(&params, &entries),
            };
            write_out(output.as_deref(), &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            suites,
            families,
            params,
            size,
            allow_invalid,
            m_max,
            big_m_max,
            format,
            output,
            no_timestamp,
            tamper,
        } => {
            let sets = match &params {
                Some(arg) => {
                    if families.len() > 1 {
                        bail!("--params takes at most one --family");
                    }
                    vec![ParamSet::parse_inline(&read_params_arg(arg)?, families.first().map(String::as_str), size)?]
                }
                None => {
                    let mut sets = Grid::load()?.expand(&families);
                    if let Some(n) = size {
                        sets.retain(|s| s.size == n);
                    }
                    if sets.is_empty() && !families.is_empty() {
                        bail!("no grid set matches the selected families");
                    }
                    sets
                }
            };
            let resolved: Vec<FamilyParams> = sets.iter().map(ParamSet::to_family_params).collect::<Result<_>>()?;
            for (set, p) in sets.iter().zip(&resolved) {
                let violations = p.validate();
                if violations.is_empty() {
                    continue;
                }
                let text: Vec<String> = violations.into_iter().map(|v| v.predicate).collect();
                if !allow_invalid {
                    bail!("{} N={} outside the admissible range: {}", set.family, set.size, text.join(", "));
                }
                writeln!(
                    stderr,
                    "warning: {} N={} outside the admissible range ({}); only formal identities are meaningful",
                    set.family,
                    set.size,
                    text.join(", ")
                )?;
            }
            let opts = SuiteOptions { m_max, big_m_max, tamper };
            let suites = selected_suites(&suites);
            let runs = resolved.iter().map(|p| run_one(p, &suites, &opts, !no_timestamp)).collect();
            let report = Report::new(runs, !no_timestamp);
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            write_out(output.as_deref(), &text, stdout)?;

            let count = |s: Status| report.checks().filter(|(_, _, c)| c.status == s).count();
            writeln!(
                stderr,
                "{} runs: {} pass, {} fail, {} degenerate, {} report",
                report.runs.len(),
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Degenerate),
                count(Status::Report)
            )?;
            for (run, suite, c) in report.checks().filter(|(_, _, c)| c.status == Status::Fail) {
                writeln!(
                    stderr,
                    "FAIL {} N={} {} {} [{}]",
                    run.params.family, run.params.size, suite.name, c.id, c.anchor
                )?;
            }
            Ok(if report.failed() { EXIT_FAIL } else { EXIT_OK })
        }
    }
}
