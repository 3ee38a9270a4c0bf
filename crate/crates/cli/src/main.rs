//! `evenlat`: analysis of even lattices and of the orthogonal groups of
//! `L₁ = U ⊕ U ⊕ L(−1)`.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use thiserror::Error;

use evenlat::Limits;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("{0}")]
    Internal(String),
}

impl From<evenlat::Error> for CliError {
    fn from(e: evenlat::Error) -> Self {
        match e {
            evenlat::Error::HypothesisViolated(_) => CliError::Hypothesis(e.to_string()),
            evenlat::Error::Internal(_) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Hypothesis(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Parser, Debug)]
#[command(name = "evenlat", version, about = "Maximal even lattices and orthogonal groups of signature (2, n+2)")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Largest discriminant group order enumerated element by element.
    #[arg(long, default_value_t = Limits::default().element_cap, global = true)]
    max_order: u64,
    /// Largest discriminant group order for which isotropic subgroups are enumerated.
    #[arg(long, default_value_t = Limits::default().subgroup_cap, global = true)]
    max_glue_order: u64,
    /// Append wall-clock timings to the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discriminant form, maximality and cusp verdict of one lattice.
    Analyze {
        /// Root lattice name (A2, D8, E7, D8+, 5A1) or a JSON file {"gram": [[...]]}.
        lattice: String,
    },
    /// Closed-form versus brute-force maximality for A_n, D_n, E_n.
    Atlas {
        /// Restrict to one family.
        #[arg(long, value_enum, ignore_case = true)]
        family: Option<commands::AtlasFamily>,
        #[arg(long, default_value_t = 1)]
        min: usize,
        #[arg(long, default_value_t = 30)]
        max: usize,
    },
    /// All maximal even overlattices with their glue groups.
    Overlattices { lattice: String },
    /// Right coset (or with --double, double coset) reduction of a scaled orthogonal matrix.
    Reduce {
        lattice: String,
        /// JSON file {"r": int, "R": [[...]]}.
        scaled: PathBuf,
        #[arg(long)]
        double: bool,
        /// Divide out the content of R before reducing.
        #[arg(long)]
        canonical: bool,
    },
    /// Membership of a rational matrix in the orthogonal subgroups of S₁.
    Classify {
        lattice: String,
        /// JSON file {"matrix": [[int or "p/q", ...]]}.
        matrix: PathBuf,
    },
    /// An element of the discriminant kernel with first column h.
    Complete {
        lattice: String,
        /// Comma-separated coordinates of a primitive isotropic vector.
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let limits = Limits { element_cap: cli.max_order, subgroup_cap: cli.max_glue_order };
    match &cli.command {
        Command::Analyze { lattice } => commands::analyze(&input::lattice(lattice)?, &limits),
        Command::Atlas { family, min, max } => commands::atlas(*family, *min, *max, &limits),
        Command::Overlattices { lattice } => commands::overlattices(&input::lattice(lattice)?, &limits),
        Command::Reduce { lattice, scaled, double, canonical } => {
            let (m, r) = input::scaled(scaled)?;
            commands::reduce(&input::lattice(lattice)?, m, r, *double, *canonical, &limits)
        }
        Command::Classify { lattice, matrix } => commands::classify(&input::lattice(lattice)?, &input::matrix(matrix)?),
        Command::Complete { lattice, h } => commands::complete(&input::lattice(lattice)?, &input::int_list(h)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut value) => {
            if cli.timings {
                if let Value::Object(map) = &mut value {
                    map.insert("elapsed_ms".into(), Value::from(start.elapsed().as_secs_f64() * 1e3));
                }
            }
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
                Format::Table => print!("{}", report::table(&value)),
            }
            let failed = value.get("verified").and_then(Value::as_bool) == Some(false);
            if failed {
                eprintln!("error: verification failed");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
