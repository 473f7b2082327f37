use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qlnash_core::random::GlobalGameParams;
use qlnash_core::refine::{parse_steps, refine};
use qlnash_core::report::{
    efficient_nash_report, full_report, nash_report, AxiomCheck, EfficientMethod, NashMethod,
    Options,
};
use qlnash_core::spec_file::{parse_spec, GameSpecFile};
use qlnash_core::sweep::{existence_sweep, SweepParams};
use qlnash_core::{Error, DEFAULT_BUDGET};

/// Solve finite games with quasi-Leontief payoffs on inf-semilattices.
#[derive(Parser)]
#[command(name = "qlnash", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Largest number of strategy profiles any enumeration may visit.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Omit the timestamp so identical inputs give identical reports.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum NashArg {
    Brute,
    Decoupled,
    Characterize,
}

#[derive(Clone, Copy, ValueEnum)]
enum EfficientArg {
    Brute,
    FixedPoint,
    Iterate,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the semilattice axioms and payoff hypotheses of a spec.
    CheckAxioms {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// List Nash points with certificates.
    Nash {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = NashArg::Brute)]
        method: NashArg,
        #[command(flatten)]
        common: Common,
    },
    /// List efficient Nash points, or iterate the E-map from a profile.
    EfficientNash {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = EfficientArg::Brute)]
        method: EfficientArg,
        /// Starting profile for `iterate`, as comma-separated labels.
        #[arg(long, required_if_eq("method", "iterate"))]
        start: Option<String>,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Nash points, efficient Nash points and diagnostics in one document.
    Report {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Re-solve a grid game at each step size.
    Refine {
        spec: PathBuf,
        /// Comma-separated step sizes, e.g. 1/4,1/8,1/16.
        #[arg(long)]
        steps: String,
        #[command(flatten)]
        common: Common,
    },
    /// Count random games with nonempty Nash and efficient Nash sets.
    Sweep {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        games: usize,
        #[arg(long, default_value_t = 3)]
        max_players: usize,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::InvariantViolation(_) => 4,
        _ => 2,
    }
}

fn emit(common: &Common, json: String, text: String) -> Result<(), Error> {
    let body = match common.format {
        Format::Json => json + "\n",
        Format::Text => text,
    };
    match &common.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn load_file(path: &Path) -> Result<GameSpecFile, Error> {
    GameSpecFile::from_json(&std::fs::read_to_string(path)?)
}

/// Splits `a,b` at top-level commas so box labels like `(0,1/2)` stay whole.
fn split_profile(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(current.trim().to_string());
                current.clear();
                continue;
            }
            _ => {}
        }
        current.push(ch);
    }
    parts.push(current.trim().to_string());
    parts
}

/// Returns `Ok(false)` when the command ran but found the input invalid.
fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::CheckAxioms { spec, common } => {
            let check = AxiomCheck::run(&load_file(&spec)?);
            emit(&common, check.to_json(), check.to_text())?;
            Ok(check.valid)
        }
        Command::Nash {
            spec,
            method,
            common,
        } => {
            let loaded = parse_spec(&spec)?;
            let method = match method {
                NashArg::Brute => NashMethod::Brute,
                NashArg::Decoupled => NashMethod::Decoupled,
                NashArg::Characterize => NashMethod::Characterize,
            };
            let report = nash_report(&loaded, method, &options(&common))?;
            emit(&common, report.to_json(), report.to_text())?;
            Ok(true)
        }
        Command::EfficientNash {
            spec,
            method,
            start,
            max_steps,
            common,
        } => {
            let loaded = parse_spec(&spec)?;
            let method = match method {
                EfficientArg::Brute => EfficientMethod::Brute,
                EfficientArg::FixedPoint => EfficientMethod::FixedPoint,
                EfficientArg::Iterate => EfficientMethod::Iterate {
                    start: split_profile(start.as_deref().unwrap_or_default()),
                    max_steps,
                },
            };
            let report = efficient_nash_report(&loaded, &method, &options(&common))?;
            emit(&common, report.to_json(), report.to_text())?;
            Ok(true)
        }
        Command::Report { spec, common } => {
            let loaded = parse_spec(&spec)?;
            let report = full_report(&loaded, &options(&common))?;
            emit(&common, report.to_json(), report.to_text())?;
            Ok(true)
        }
        Command::Refine {
            spec,
            steps,
            common,
        } => {
            let file = load_file(&spec)?;
            let report = refine(&file, &parse_steps(&steps)?, common.budget)?;
            emit(&common, report.to_json(), report.to_text())?;
            Ok(true)
        }
        Command::Sweep {
            seed,
            games,
            max_players,
            max_size,
            common,
        } => {
            let params = SweepParams {
                seed,
                games,
                global: GlobalGameParams {
                    max_players,
                    max_space_size: max_size,
                    comprehensive_constraints: false,
                },
                individual_max_size: max_size.min(5),
            };
            let report = existence_sweep(&params, common.budget)?;
            emit(&common, report.to_json(), report.to_text())?;
            Ok(true)
        }
    }
}

fn options(common: &Common) -> Options {
    Options {
        budget: common.budget,
        deterministic: common.deterministic,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
