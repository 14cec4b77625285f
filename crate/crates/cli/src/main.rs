use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gamma_torsion::pipeline::{self, format_report, format_table, order_bound, Options, Side};
use gamma_torsion::Error;

#[derive(Parser, Debug)]
#[command(
    name = "gamma-torsion",
    version,
    about = "Torsion in coinvariants of Γ(ker d2) and Γ(coker d2) for finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute Ĥ₀(π; Γ(L)) for one group.
    Compute {
        /// Group spec such as `C4xC2xC2`, `Q8xC2`, or `@group.json`.
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "ker", value_parser = parse_side)]
        side: Side,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Largest group order accepted (default: $GAMMA_TORSION_MAX_ORDER or 32).
        #[arg(long)]
        max_order: Option<usize>,
        /// Put each lattice in a seeded random basis first.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Ĥ₀(π; Γ(ker d2)) for every catalog group up to an order.
    Table {
        #[arg(long)]
        max_order: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::OrderBound { .. } => 3,
        Error::Consistency(_) | Error::NotALattice(_) => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Compute {
            group,
            side,
            format,
            max_order,
            seed,
        } => {
            let opts = Options {
                max_order: order_bound(max_order)?,
                seed,
            };
            let report = pipeline::compute(&group, side, &opts)?;
            match format {
                Format::Text => print!("{}", format_report(&report)),
                Format::Json => println!("{}", report.to_json()?),
            }
        }
        Command::Table { max_order, format } => {
            let opts = Options {
                max_order: order_bound(None)?,
                seed: None,
            };
            let reports = pipeline::table(max_order, &opts)?;
            match format {
                Format::Text => print!("{}", format_table(&reports)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
            }
        }
        Command::Verify { suite, format } => {
            let report = pipeline::verify(&suite)?;
            match format {
                Format::Text => {
                    for r in &report.results {
                        let mark = if r.passed { "PASS" } else { "FAIL" };
                        match &r.detail {
                            Some(d) => println!("{mark} [{}] {}: {d}", r.suite, r.name),
                            None => println!("{mark} [{}] {}", r.suite, r.name),
                        }
                    }
                    let failed = report.failures().count();
                    println!("{} properties, {failed} failed", report.results.len());
                }
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
            }
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    log::debug!("{cli:?}");
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
