mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Ctx, Failure, EXIT_ERROR};
use output::Format;

/// Exact beta-expansions, normality checks and normal-number digit generators.
///
/// Exit codes: 0 ok, 1 usage or input error, 2 certification failure,
/// 3 bound violation, 4 budget exhausted.
#[derive(Debug, Parser)]
#[command(name = "betanormal", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads for census enumeration (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Generator config used by `generate` when no path is given.
    #[arg(long, global = true)]
    seed_config: Option<PathBuf>,
    /// Significant digits of decimal renderings.
    #[arg(long, global = true, default_value_t = 12)]
    decimal_digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify a base as a Pisot number.
    Certify {
        /// Integer, name (phi, plastic, tribonacci) or monic polynomial in x.
        base: String,
    },
    /// Expansion of 1, its modified form, the orbit of 1 and zero-run bounds.
    Expansion { base: String },
    /// Count (and optionally list) admissible words of length n.
    Words {
        base: String,
        n: usize,
        #[arg(long)]
        list: bool,
        /// Largest number of words to list.
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
    },
    /// Cylinder of an admissible word.
    Cylinder {
        base: String,
        /// Digits, concatenated or comma separated.
        word: String,
    },
    /// Parry measure of every cylinder of order k.
    Measure {
        base: String,
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
    },
    /// Explicit constants M, η and C for given ε and k.
    Constants {
        base: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        k: usize,
        /// Use the Blichfeldt bound instead of the exact zero run.
        #[arg(long)]
        blichfeldt: bool,
    },
    /// Exhaustive census of non-normal words against the analytic bounds.
    Census {
        base: String,
        /// Length or inclusive range `a..b`.
        #[arg(long)]
        n: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        k: usize,
    },
    /// Leftmost largest cylinder inside a rational interval.
    Inscribe { base: String, lo: String, hi: String },
    /// Run a digit generator from a JSON config.
    Generate {
        config: Option<PathBuf>,
        /// Output directory for digit files and the trace.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the configured digit target.
        #[arg(long)]
        target: Option<usize>,
    },
    /// Discrepancy or block-frequency series of a digit file.
    Analyze {
        digits: PathBuf,
        #[arg(long)]
        base: String,
        /// Prefix length to analyse.
        #[arg(long)]
        n: usize,
        /// Distance between reported prefixes (default n/10).
        #[arg(long)]
        step: Option<usize>,
        /// Block length for non-integer bases.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

fn run(cli: &Cli) -> commands::Outcome {
    let ctx = Ctx { digits: cli.decimal_digits, seed_config: cli.seed_config.clone() };
    match &cli.command {
        Command::Certify { base } => commands::certify(&ctx, base),
        Command::Expansion { base } => commands::expansion(&ctx, base),
        Command::Words { base, n, list, limit } => commands::words(&ctx, base, *n, *list, *limit),
        Command::Cylinder { base, word } => commands::cylinder(&ctx, base, word),
        Command::Measure { base, k, limit } => commands::measure(&ctx, base, *k, *limit),
        Command::Constants { base, eps, k, blichfeldt } => commands::constants(&ctx, base, eps, *k, *blichfeldt),
        Command::Census { base, n, eps, k } => commands::census(&ctx, base, n, eps, *k),
        Command::Inscribe { base, lo, hi } => commands::inscribe(&ctx, base, lo, hi),
        Command::Generate { config, out, target } => commands::generate_cmd(&ctx, config.as_deref(), out, *target),
        Command::Analyze { digits, base, n, step, k } => commands::analyze(&ctx, digits, base, *n, *step, *k),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global().ok();
    }
    let (report, failure) = match run(&cli) {
        Ok(r) => (Some(r), None),
        Err(Failure { code, message, report }) => (report, Some((code, message))),
    };
    let mut out = std::io::stdout().lock();
    if let Some(r) = report {
        if let Err(e) = r.render(cli.format, &mut out) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    }
    let _ = out.flush();
    match failure {
        None => ExitCode::SUCCESS,
        Some((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code as u8)
        }
    }
}
