use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use repmeasure_core::generators::Family;
use repmeasure_core::oracle::DEFAULT_CAP;
use repmeasure_core::CoreError;

mod commands;

/// Repetitiveness measures of a text: maximal repeats, their extension
/// counts, the CDAWG, and the bounds relating them.
#[derive(Debug, Parser)]
#[command(name = "repmeasure", version)]
struct Cli {
    /// Largest text length the brute-force oracle will accept.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute mr, er, el and el/er of a file or inline text.
    Measure {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also list every maximal repeat with its extension sets.
        #[arg(long)]
        list_repeats: bool,
        /// Occurrences shown per repeat in the listing.
        #[arg(long, default_value_t = 8)]
        max_occurrences: usize,
    },
    /// Write a generated text as raw bytes plus a `<out>.json` sidecar.
    Gen {
        family: Family,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        sigma: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the seven inequalities; exits 1 naming any that fail.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// Replace the measured report by an impossible one (self-test).
        #[arg(long)]
        inject_bogus_report: bool,
    },
    /// Build the CDAWG of the terminated text and report its size.
    CdawgStats {
        #[command(flatten)]
        input: Input,
        /// Terminator symbol to append: a character, a decimal value or 0xNN.
        /// Defaults to the smallest byte absent from the text.
        #[arg(long, value_parser = parse_terminator)]
        terminator: Option<u8>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Include the full node and edge lists.
        #[arg(long)]
        dump: bool,
    },
    /// Measure a grid of generated texts; with no grid flags, runs the eq1
    /// and thm2 grids used for the tightness tables.
    Sweep {
        #[command(flatten)]
        grid: SweepGrid,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the fast engine against the brute-force oracle.
    OracleCheck {
        #[command(flatten)]
        source: OracleSource,
        /// Largest n for generated instances.
        #[arg(long, default_value_t = 200)]
        max_n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4])]
        sigmas: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Input {
    path: Option<PathBuf>,
    /// Inline text instead of a file.
    #[arg(long)]
    text: Option<String>,
}

#[derive(Debug, Args)]
struct SweepGrid {
    #[arg(long, value_delimiter = ',')]
    eq1_k: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    thm2_n: Vec<usize>,
    #[arg(long, value_delimiter = ',', requires = "thm2_n")]
    thm2_sigma: Vec<usize>,
    #[arg(long)]
    random_n: Option<usize>,
    #[arg(long, value_delimiter = ',', requires = "random_n")]
    random_sigma: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    random_seeds: u64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct OracleSource {
    path: Option<PathBuf>,
    #[arg(long)]
    text: Option<String>,
    /// Number of random instances.
    #[arg(long)]
    random: Option<u64>,
    /// Every generator family up to --max-n.
    #[arg(long)]
    families: bool,
    /// Fuzz with random instances for this many minutes.
    #[arg(long)]
    minutes: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

fn parse_terminator(s: &str) -> Result<u8, String> {
    if let Some(hex) = s.strip_prefix("0x") {
        return u8::from_str_radix(hex, 16).map_err(|e| e.to_string());
    }
    if let Ok(v) = s.parse::<u8>() {
        return Ok(v);
    }
    match s.as_bytes() {
        [b] => Ok(*b),
        _ => Err(format!("expected a single byte, a value 0..=255 or 0xNN, got `{s}`")),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::SizeCapExceeded { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if let Some(CoreError::SizeCapExceeded { n, .. }) = err.downcast_ref::<CoreError>() {
                eprintln!("hint: rerun with --cap {n} (the oracle is cubic) or use a shorter input");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
