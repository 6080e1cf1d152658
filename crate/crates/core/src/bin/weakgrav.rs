use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use weakgrav::cli::{self, CliError, OracleChoice, OutputFormat};

#[derive(Parser)]
#[command(name = "weakgrav", version, about = "Weak-value amplification of gravitational displacements")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Include the N·Δm·T phase.
    #[arg(long, global = true)]
    fast_phase: bool,
    #[arg(long, global = true, value_enum)]
    oracle: Option<Oracle>,
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the configured T range.
    Scan { config: PathBuf },
    /// Evaluate one observation time (seconds).
    Point {
        config: PathBuf,
        #[arg(long = "T")]
        t: f64,
    },
    /// Compare analytic formulas against the oracles at one time (seconds,
    /// or reference times for a dimensionless config).
    Compare {
        config: PathBuf,
        #[arg(long = "T")]
        t: f64,
    },
    /// Weak value and pointer shift from a JSON spec.
    Weakvalue { spec: PathBuf },
    /// Maintenance for checked-in reference data.
    Golden {
        #[command(subcommand)]
        action: Golden,
    },
}

#[derive(Subcommand)]
enum Golden {
    /// Rewrite data/benchmark_golden.csv.
    Regenerate {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Closed,
    Grid,
    Both,
}

fn load(args: &Args, path: &PathBuf) -> Result<cli::RunConfig, CliError> {
    let mut config = cli::parse_config(&cli::read(path)?)?;
    if args.fast_phase {
        config.include_fast_phase = true;
    }
    if let Some(f) = args.format {
        config.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    if let Some(o) = args.oracle {
        config.oracle = match o {
            Oracle::Closed => OracleChoice::Closed,
            Oracle::Grid => OracleChoice::Grid,
            Oracle::Both => OracleChoice::Both,
        };
    }
    Ok(config)
}

fn run(args: &Args) -> Result<String, CliError> {
    match &args.command {
        Command::Scan { config } => {
            let c = load(args, config)?;
            Ok(cli::run_scan(&c, args.workers)?.render(c.format))
        }
        Command::Point { config, t } => {
            let c = load(args, config)?;
            let v = cli::run_point(&c, *t)?;
            Ok(match c.format {
                OutputFormat::Csv => cli::run::point_csv(&v),
                OutputFormat::Json => cli::run::pretty(&v),
            })
        }
        Command::Compare { config, t } => {
            let text = cli::read(config)?;
            let report = if cli::is_reduced(&text) {
                cli::run_compare_reduced(&cli::parse_reduced_config(&text)?, *t)?
            } else {
                cli::run_compare(&load(args, config)?, *t)?
            };
            Ok(cli::run::pretty(&report))
        }
        Command::Weakvalue { spec } => Ok(cli::run::pretty(&cli::run_weakvalue(&cli::read(spec)?)?)),
        Command::Golden {
            action: Golden::Regenerate { dir },
        } => {
            let dir = dir.clone().unwrap_or_else(cli::data_dir);
            Ok(format!("wrote {}\n", cli::golden_regenerate(&dir)?.display()))
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(text) => {
            let written = match &args.output {
                Some(path) => cli::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
