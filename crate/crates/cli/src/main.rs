use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cover_jacobians::report::{self, render_census_text, render_text, to_json};
use cover_jacobians::{DecomposeOptions, Error};

#[derive(Parser)]
#[command(
    name = "cover-jacobians",
    version,
    about = "Fixed points and Jacobian splittings of curves in (1,d)-polarized abelian surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Treat the surface A as a product of elliptic curves in the verdict.
    #[arg(long = "assume-A-split", global = true)]
    assume_a_split: bool,
    /// Largest automorphism group searched for partitions.
    #[arg(long, default_value_t = cover_jacobians::group::DEFAULT_MAX_GROUP_ORDER, global = true)]
    max_group_order: usize,
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Fix counts, partitions, relations and the splitting for one (d, X).
    Analyze {
        #[arg(long)]
        d: u64,
        /// Generators of X as integer pairs mod d, e.g. "2,0;0,2".
        #[arg(long)]
        subgroup: String,
    },
    /// Smooth hyperelliptic curves in a symmetric linear system of type (1,d).
    Census {
        #[arg(long)]
        d: u64,
    },
    /// Run the built-in fixture suite.
    #[command(alias = "verify-paper")]
    Verify,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_internal() { 3 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.jobs == Some(0) {
        return fail(Error::Domain("--jobs must be positive".into()));
    }
    let opts =
        DecomposeOptions { assume_a_split: cli.assume_a_split, max_group_order: cli.max_group_order, jobs: cli.jobs };
    match cli.command {
        Command::Analyze { d, subgroup } => match report::analyze(d, &subgroup, &opts) {
            Ok(doc) => {
                match cli.format {
                    Format::Text => print!("{}", render_text(&doc)),
                    Format::Json => println!("{}", to_json(&doc)),
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Census { d } => match report::census(d) {
            Ok(doc) => {
                match cli.format {
                    Format::Text => print!("{}", render_census_text(&doc)),
                    Format::Json => println!("{}", to_json(&doc)),
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Verify => match cover_jacobians::verify_all(&opts) {
            Ok(results) => {
                match cli.format {
                    Format::Text => {
                        for r in &results {
                            println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.detail);
                        }
                    }
                    Format::Json => println!("{}", to_json(&results)),
                }
                if results.iter().all(|r| r.passed) {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(2)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(if e.is_internal() { 3 } else { 2 })
            }
        },
    }
}
