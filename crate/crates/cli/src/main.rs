//! `equipop`: enumeration, decomposition trees, pattern census and the
//! identity suites from the command line.
//!
//! Exit codes: 0 on success, 1 when a mathematical check fails or a pattern
//! is not separable, 2 on usage errors.

mod verify;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use equipop::dectree::{decompose, signature, wedge};
use equipop::popularity::{
    enumerate_separable, Census, ClassReport, ClassificationCheck, StructuralFilter, DEFAULT_BUDGET,
};
use equipop::{Partition, Permutation, TreeError};

#[derive(Parser)]
#[command(
    name = "equipop",
    version,
    about = "Pattern popularity in separable permutations"
)]
struct Cli {
    /// Worker threads for the census (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Maximum census windows s_N·C(N,k).
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List separable permutations of length n in lexicographic order.
    Enumerate {
        n: usize,
        #[arg(long, value_enum, default_value_t = EnumFormat::Lines)]
        format: EnumFormat,
    },
    /// Print the decomposition tree of a separable permutation.
    Tree { perm: String },
    /// Print the signature of a separable permutation.
    Signature { perm: String },
    /// Print the wedge permutation of a partition such as 2,1.
    Wedge { partition: String },
    /// Popularity of a pattern in separable permutations of each length up to N.
    Popularity {
        pattern: String,
        #[arg(long)]
        max_length: usize,
        #[arg(long, value_enum, default_value_t = PopFormat::Series)]
        format: PopFormat,
        #[arg(long, default_value = "all", value_parser = parse_filter)]
        filter: StructuralFilter,
    },
    /// Equipopularity classes of all separable patterns of one length, as JSON.
    Classes {
        #[arg(long)]
        pattern_length: usize,
        #[arg(long)]
        max_length: usize,
    },
    /// Run an identity suite and print one line per check.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumFormat {
    Lines,
    Json,
    Count,
}

#[derive(Clone, Copy, ValueEnum)]
enum PopFormat {
    Series,
    Csv,
}

fn parse_filter(s: &str) -> Result<StructuralFilter, String> {
    s.parse()
}

enum Failure {
    Math(String),
    Usage(String),
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn parse_perm(s: &str) -> Result<Permutation, Failure> {
    s.parse()
        .map_err(|e| Failure::Usage(format!("invalid permutation {s:?}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every asserted check passed.
fn run(cli: &Cli, out: &mut impl Write) -> Result<bool, Failure> {
    let io_err = |e: io::Error| Failure::Math(e.to_string());
    match &cli.command {
        Command::Enumerate { n, format } => {
            if *n == 0 {
                return Err(Failure::Usage("n must be at least 1".into()));
            }
            match format {
                EnumFormat::Lines => {
                    for p in enumerate_separable(*n) {
                        writeln!(out, "{}", p.to_short_string()).map_err(io_err)?;
                    }
                }
                EnumFormat::Json => {
                    let all: Vec<String> = enumerate_separable(*n)
                        .map(|p| p.to_short_string())
                        .collect();
                    writeln!(out, "{}", serde_json::to_string(&all).unwrap()).map_err(io_err)?;
                }
                EnumFormat::Count => {
                    writeln!(out, "{}", enumerate_separable(*n).count()).map_err(io_err)?
                }
            }
        }
        Command::Tree { perm } => {
            let tree = decompose(&parse_perm(perm)?)?;
            writeln!(out, "{tree}").map_err(io_err)?;
        }
        Command::Signature { perm } => {
            let tree = decompose(&parse_perm(perm)?)?;
            writeln!(out, "{}", signature(&tree)).map_err(io_err)?;
        }
        Command::Wedge { partition } => {
            let lambda: Partition = partition
                .parse()
                .map_err(|e| Failure::Usage(format!("invalid partition {partition:?}: {e}")))?;
            if lambda.is_empty() {
                return Err(Failure::Usage("partition must be nonempty".into()));
            }
            let (_, omega) = wedge(&lambda)?;
            writeln!(out, "{}", omega.to_short_string()).map_err(io_err)?;
        }
        Command::Popularity {
            pattern,
            max_length,
            format,
            filter,
        } => {
            let sigma = parse_perm(pattern)?;
            if sigma.is_empty() {
                return Err(Failure::Usage("pattern must be nonempty".into()));
            }
            if !sigma.is_separable() {
                return Err(Failure::Math(format!("{sigma} is not separable")));
            }
            if sigma.len() > *max_length {
                return Err(Failure::Usage(format!(
                    "--max-length must be at least {}",
                    sigma.len()
                )));
            }
            let table = Census::new(sigma.len(), *max_length)
                .filter(*filter)
                .budget(cli.budget)
                .run()
                .map_err(|e| Failure::Math(e.to_string()))?;
            let row = table
                .get(&sigma)
                .expect("separable pattern is in the table");
            match format {
                PopFormat::Series => {
                    let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                    writeln!(out, "{}", cells.join(",")).map_err(io_err)?;
                }
                PopFormat::Csv => {
                    write!(out, "pattern").map_err(io_err)?;
                    for n in sigma.len()..=*max_length {
                        write!(out, ",n={n}").map_err(io_err)?;
                    }
                    write!(out, "\n{}", sigma.to_short_string()).map_err(io_err)?;
                    for c in row {
                        write!(out, ",{c}").map_err(io_err)?;
                    }
                    writeln!(out).map_err(io_err)?;
                }
            }
        }
        Command::Classes {
            pattern_length,
            max_length,
        } => {
            if *pattern_length == 0 || pattern_length > max_length {
                return Err(Failure::Usage(
                    "need 1 <= --pattern-length <= --max-length".into(),
                ));
            }
            let table = Census::new(*pattern_length, *max_length)
                .budget(cli.budget)
                .run()
                .map_err(|e| Failure::Math(e.to_string()))?;
            let check = ClassificationCheck::from_report(ClassReport::from_table(&table));
            let mut json = check.report.to_json();
            json["expected_classes"] = check.expected_classes.into();
            json["pass"] = check.pass().into();
            writeln!(out, "{}", serde_json::to_string_pretty(&json).unwrap()).map_err(io_err)?;
            return Ok(check.pass());
        }
        Command::Verify { suite, order } => {
            let checks = verify::run(*suite, *order);
            let mut ok = true;
            for c in &checks {
                ok &= c.pass;
                writeln!(
                    out,
                    "{} {:<15} {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.suite,
                    c.detail
                )
                .map_err(io_err)?;
            }
            let passed = checks.iter().filter(|c| c.pass).count();
            writeln!(out, "{passed}/{} checks passed", checks.len()).map_err(io_err)?;
            return Ok(ok);
        }
    }
    Ok(true)
}
