use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quiddity::{NamedTarget, Sign};
use quiddity_cli::table::{cmd_table, TableKind};
use quiddity_cli::verify::{cmd_verify, parse_list, Grid, Suite};
use quiddity_cli::{
    budget_from_env, cmd_count, cmd_crt, cmd_formula, CountConfig, FormulaArgs, Method,
};

#[derive(Parser)]
#[command(
    name = "quiddity",
    version,
    about = "Exact counts of λ-quiddities over Z/NZ"
)]
struct Cli {
    /// Output format; csv applies to `table` only.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Candidate budget for exhaustive search (overrides QUIDDITY_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Count tuples with a given product.
    Count {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        size: usize,
        /// id, neg-id, s, neg-s, t, neg-t, or a,b,c,d.
        #[arg(long, default_value = "id")]
        target: String,
        /// e.g. a2-unit,a3-nonunit,a4=3
        #[arg(long, default_value = "")]
        constraint: String,
        /// auto, dp, brute or formula.
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Evaluate a closed form by name.
    Formula {
        name: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        sign: Option<String>,
        #[arg(long)]
        target: Option<String>,
    },
    /// Print a count table: odd-w-plus, w8, delta-id or delta-s.
    Table {
        which: String,
        /// Row labels, e.g. 2..10 or 3,5,7.
        #[arg(long)]
        rows: Option<String>,
    },
    /// Run a verification suite: bijections, recursion, bounds, crt, totality, all.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Assemble a count over Z/NZ from its coprime pieces.
    Crt {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        size: u32,
        #[arg(long, default_value = "plus")]
        sign: String,
    },
}

type CliResult = Result<ExitCode, String>;

fn config_error(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn print_json(value: &impl serde::Serialize) -> CliResult {
    println!(
        "{}",
        serde_json::to_string_pretty(value).map_err(config_error)?
    );
    Ok(ExitCode::SUCCESS)
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    Sign::parse(s).ok_or_else(|| format!("unknown sign '{s}'; use plus or minus"))
}

fn json_only(format: Format, command: &str) -> Result<(), String> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(format!("{command} only produces json")),
    }
}

fn run(cli: Cli) -> CliResult {
    let budget = match cli.budget {
        Some(b) => b,
        None => budget_from_env().map_err(config_error)?,
    };
    match cli.command {
        Command::Count {
            modulus,
            size,
            target,
            constraint,
            method,
        } => {
            json_only(cli.format, "count")?;
            let method =
                Method::parse(&method).ok_or_else(|| format!("unknown method '{method}'"))?;
            let config = CountConfig {
                modulus,
                size,
                target,
                constraint,
                method,
                budget,
            };
            print_json(&cmd_count(&config).map_err(config_error)?)
        }
        Command::Formula {
            name,
            n,
            m,
            q,
            sign,
            target,
        } => {
            json_only(cli.format, "formula")?;
            let args = FormulaArgs {
                n,
                m,
                q,
                sign: sign.as_deref().map(parse_sign).transpose()?,
                target: target
                    .as_deref()
                    .map(|t| NamedTarget::parse(t).ok_or_else(|| format!("unknown target '{t}'")))
                    .transpose()?,
            };
            print_json(&cmd_formula(&name, &args).map_err(config_error)?)
        }
        Command::Table { which, rows } => {
            let kind =
                TableKind::parse(&which).ok_or_else(|| format!("unknown table '{which}'"))?;
            let rows = rows
                .as_deref()
                .map(parse_list::<u32>)
                .transpose()
                .map_err(config_error)?;
            let table = cmd_table(kind, rows.as_deref(), budget).map_err(config_error)?;
            match cli.format {
                Format::Csv => {
                    print!("{}", table.to_csv());
                    Ok(ExitCode::SUCCESS)
                }
                Format::Json => print_json(&table.to_json()),
            }
        }
        Command::Verify {
            suite,
            modulus,
            m,
            sizes,
            max_size,
        } => {
            json_only(cli.format, "verify")?;
            let suite = Suite::parse(&suite).ok_or_else(|| format!("unknown suite '{suite}'"))?;
            let grid = Grid {
                moduli: modulus
                    .as_deref()
                    .map(parse_list::<u64>)
                    .transpose()
                    .map_err(config_error)?,
                ms: m
                    .as_deref()
                    .map(parse_list::<u32>)
                    .transpose()
                    .map_err(config_error)?,
                sizes: sizes
                    .as_deref()
                    .map(parse_list::<u32>)
                    .transpose()
                    .map_err(config_error)?,
                max_size,
            };
            let report = cmd_verify(suite, &grid, budget).map_err(config_error)?;
            let failed: Vec<_> = report.failures().collect();
            for f in &failed {
                eprintln!(
                    "FAIL [{}] {}: {}",
                    f.suite,
                    f.name,
                    f.detail.as_deref().unwrap_or("")
                );
            }
            println!(
                "{}",
                serde_json::json!({
                    "suite": suite.name(),
                    "passed": failed.is_empty(),
                    "checks": report.checks.len(),
                    "failures": failed,
                })
            );
            Ok(if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Crt {
            modulus,
            size,
            sign,
        } => {
            json_only(cli.format, "crt")?;
            print_json(&cmd_crt(modulus, size, parse_sign(&sign)?, budget).map_err(config_error)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
