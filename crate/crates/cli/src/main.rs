mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use crate::commands::Outcome;
use crate::config::{parse_tol, Config, OutputFormat, Overrides, CONFIG_ENV};

/// Expansions in negative real bases.
#[derive(Debug, Parser)]
#[command(name = "negbeta", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Cap on interval precision for solving and validation [default: 256]
    #[arg(long, global = true)]
    precision_bits: Option<u32>,

    /// Target enclosure width: a decimal, p/q, or 2^-k [default: 2^-40]
    #[arg(long, global = true, value_parser = parse_tol)]
    tol: Option<BigRational>,

    /// Most digits generated for one comparison [default: 4096]
    #[arg(long, global = true)]
    max_depth: Option<usize>,

    /// Digits of u compared before giving up [default: 256]
    #[arg(long, global = true)]
    u_depth: Option<usize>,

    /// Output format [default: text]
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,

    /// File of key = value settings; flags take precedence
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,

    /// Fractional decimal digits in printed numbers
    #[arg(long, global = true, default_value_t = 20)]
    decimals: usize,

    /// Give up on solving after this many milliseconds
    #[arg(long, global = true)]
    timeout_ms: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Digits of a point (default: the left endpoint) for a base
    Expand {
        /// Base: rat:p/q, dec:d.ddd or alg:c0,..,cn:lo:hi
        #[arg(long)]
        beta: String,
        /// Starting point, rational (rat:p/q, dec:d.ddd or p/q)
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        digits: usize,
    },
    /// The base whose left endpoint has the given expansion
    Solve {
        /// Eventually periodic sequence, or a finite prefix
        #[arg(long)]
        sequence: String,
    },
    /// Whether a sequence is the left-endpoint expansion of some base
    Validate {
        #[arg(long)]
        sequence: String,
    },
    /// Whether a sequence or word is an expansion for a given base
    Admissible {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        word: String,
    },
    /// Order of two bases from the order of their expansions
    Compare {
        #[arg(long)]
        seq_a: String,
        #[arg(long)]
        seq_b: String,
    },
    /// Prefix of the fixed point u of 1 -> 100, 0 -> 1
    USeq {
        #[arg(long)]
        digits: usize,
    },
    /// Lap numbers and cylinders of a given length
    Laps {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        n: usize,
        /// Also list the cylinders
        #[arg(long)]
        list: bool,
    },
    /// The base gamma_k, root of x^(g_k+1) = x + 1
    Gamma {
        #[arg(long)]
        k: u32,
    },
}

pub struct Settings {
    pub config: Config,
    pub decimals: usize,
    pub deadline: Option<Instant>,
}

fn run(cli: Cli) -> Result<Outcome, Outcome> {
    let g = &cli.global;
    let overrides = Overrides {
        precision_bits: g.precision_bits,
        tol: g.tol.clone(),
        max_depth: g.max_depth,
        u_depth: g.u_depth,
        output: g.output,
    };
    let config = Config::resolve(g.config.as_deref(), &overrides)
        .map_err(|e| Outcome::usage(e.to_string()))?;
    let s = Settings {
        config,
        decimals: g.decimals,
        deadline: g
            .timeout_ms
            .map(|ms| Instant::now() + Duration::from_millis(ms)),
    };
    match &cli.command {
        Command::Expand { beta, x, digits } => commands::expand(&s, beta, x.as_deref(), *digits),
        Command::Solve { sequence } => commands::solve(&s, sequence),
        Command::Validate { sequence } => commands::validate(&s, sequence),
        Command::Admissible { beta, word } => commands::admissible(&s, beta, word),
        Command::Compare { seq_a, seq_b } => commands::compare(&s, seq_a, seq_b),
        Command::USeq { digits } => commands::u_seq(&s, *digits),
        Command::Laps { beta, n, list } => commands::laps(&s, beta, *n, *list),
        Command::Gamma { k } => commands::gamma(&s, *k),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors; usage mistakes are input errors
            let code = if e.use_stderr() {
                commands::EXIT_INPUT
            } else {
                commands::EXIT_OK
            };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    let requested = cli.global.output;
    let out = run(cli).unwrap_or_else(|e| e);
    // a config error leaves only the flag to go by
    let format = out.format.or(requested).unwrap_or(OutputFormat::Text);
    out.print(format);
    ExitCode::from(out.code)
}
