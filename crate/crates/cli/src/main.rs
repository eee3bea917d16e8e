use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use skewtaylor::spec::{parse_field_descriptor, FIELD_ENV};
use skewtaylor::{parse_spec, run, CliError, Command, Format, RunOptions};

/// Skew Taylor resolutions of monomial ideals and their invariants.
#[derive(Debug, Parser)]
#[command(name = "skewtaylor", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// TOML problem description; `-` reads standard input.
    spec: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel checks.
    #[arg(long)]
    threads: Option<usize>,
    /// Homological truncation for series and comparisons
    #[arg(long)]
    i_max: Option<usize>,
    /// Internal-degree bound for the resolution of k
    #[arg(long)]
    d_max: Option<u64>,
    /// Default field when the spec names none: `rational` or `prime:<p>`.
    #[arg(long, env = FIELD_ENV)]
    field: Option<String>,
}

fn execute(args: &Args) -> Result<skewtaylor::Report, CliError> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    }
    let text = if args.spec.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(&args.spec)
    }
    .map_err(|e| CliError::Input(format!("{}: {e}", args.spec.display())))?;
    let default_field = args.field.as_deref().map(parse_field_descriptor).transpose()?;
    let spec = parse_spec(&text, default_field)?;
    let opts = RunOptions {
        seed: args.seed,
        i_max: args.i_max,
        d_max: args.d_max,
    };
    run(args.command, &spec, &opts)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(report) => {
            print!("{}", report.render(args.format));
            if let Some(f) = &report.failure {
                eprintln!("failing invariant: {f}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
