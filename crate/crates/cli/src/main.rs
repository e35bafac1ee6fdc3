use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use indsheaf_cli::dsl;
use indsheaf_cli::error::{CliError, Result};
use indsheaf_cli::format::parse_field;
use indsheaf_cli::run::{self, Config};
use indsheaf_cli::suites::{self, SuiteConfig};

/// Exact computations with ind-sheaves on finite posets and the
/// combinatorial line.
#[derive(Parser, Debug)]
#[command(name = "indsheaf", version)]
struct Args {
    /// Coefficient field: `q` or `fp:<p>`.
    #[arg(long, default_value = "q")]
    field: String,
    /// Level at which uncertified answers are truncated.
    #[arg(long, default_value_t = indsheaf::indcat::DEFAULT_TRUNCATION)]
    trunc: usize,
    /// Seed for the property suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Script to run.
    #[arg(long, conflicts_with = "suite")]
    script: Option<PathBuf>,
    /// Property suite to run (`all` for every suite).
    #[arg(long)]
    suite: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append wall-clock times to script records.
    #[arg(long)]
    timings: bool,
}

fn execute(args: &Args) -> Result<(String, bool)> {
    let field = parse_field(&args.field)?;
    let config = Config {
        field,
        trunc: args.trunc,
        seed: args.seed,
        timings: args.timings,
    };
    if let Some(path) = &args.script {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let script = dsl::parse(&text)?;
        let report = run::run(&script, &config)?;
        return Ok((report.to_string(), report.failures() == 0));
    }
    if let Some(name) = &args.suite {
        let cfg = SuiteConfig {
            field,
            seed: args.seed,
            trunc: args.trunc,
        };
        let report = suites::run_suite(name, &cfg)?;
        return Ok((
            format!("{}\n{report}", run::header(&config)),
            report.passed(),
        ));
    }
    Err(CliError::Config(
        "nothing to do: pass --script <file> or --suite <name>".into(),
    ))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok((text, ok)) => {
            let written = match &args.out {
                Some(path) => std::fs::write(path, format!("{text}\n")),
                None => {
                    println!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
