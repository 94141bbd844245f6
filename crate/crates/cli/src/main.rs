mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bosonkit::{Error, Limits};

use crate::config::Config;

/// Exact normal ordering, Stirling/Bell numbers and model Feynman diagram
/// counts.
#[derive(Debug, Parser)]
#[command(name = "bosonkit", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Lift every resource cap (word length, partition size, series order).
    #[arg(long, global = true)]
    unsafe_cap: bool,

    /// TOML file with defaults for long flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeqName {
    Bell,
    Stirling,
    Involution,
    BellRs,
    QStirling,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a table of an integer sequence.
    Seq {
        #[arg(value_enum)]
        name: SeqName,
        /// Largest index to print (default 10).
        #[arg(long)]
        max_n: Option<usize>,
        /// Creator power for bell-rs.
        #[arg(long)]
        r: Option<usize>,
        /// Annihilator power for bell-rs.
        #[arg(long)]
        s: Option<usize>,
    },
    /// Normal-order an operator expression such as "(ad a)^2".
    NormalOrder {
        expr: String,
        /// Keep the deformation parameter q symbolic.
        #[arg(long)]
        q: bool,
    },
    /// Count weighted line graphs on n labeled lines.
    Graphs {
        #[arg(long)]
        lines: usize,
        /// Vertex weights, e.g. "1:1;2:1;default:0".
        #[arg(long = "V", value_name = "SPEC")]
        vertex: String,
        /// Origin weights, e.g. "1:1;default:0".
        #[arg(long = "L", value_name = "SPEC")]
        origin: String,
        /// Also print the generating function counting terms up to this order.
        #[arg(long, value_name = "N")]
        series: Option<usize>,
    },
    /// Dump every set partition of {1..n} as a restricted growth string.
    Partitions {
        #[arg(long)]
        n: usize,
    },
    /// Run the cross-verification battery.
    Verify {
        #[arg(long)]
        max_n: Option<usize>,
        /// Precision in bits for numeric checks (default 256, or
        /// BOSONKIT_PREC_BITS).
        #[arg(long)]
        prec: Option<u32>,
        #[arg(long, hide = true)]
        corrupt_stirling: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("verification failed: {}", failed.join(", "))]
    Verification { output: String, failed: Vec<String> },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Core(Error::ResourceCap { .. }) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
        }
    }
}

/// Settings resolved from flags, config file and environment.
pub struct Settings {
    pub format: Format,
    pub limits: Limits,
    pub config: Config,
}

const PREC_ENV: &str = "BOSONKIT_PREC_BITS";
const DEFAULT_PREC: u32 = 256;

impl Settings {
    /// Flag, then environment, then config file, then 256.
    pub fn prec(&self, flag: Option<u32>) -> Result<u32, CliError> {
        if let Some(p) = flag {
            return Ok(p);
        }
        if let Ok(text) = std::env::var(PREC_ENV) {
            return text.trim().parse().map_err(|_| {
                CliError::Usage(format!("{PREC_ENV} must be an integer, got {text:?}"))
            });
        }
        match self.config.usize("prec")? {
            Some(p) => {
                u32::try_from(p).map_err(|_| CliError::Usage("config prec too large".into()))
            }
            None => Ok(DEFAULT_PREC),
        }
    }

    pub fn max_n(&self, flag: Option<usize>, default: usize) -> Result<usize, CliError> {
        Ok(match flag {
            Some(n) => n,
            None => self.config.usize("max-n")?.unwrap_or(default),
        })
    }
}

fn settings(cli: &Cli) -> Result<Settings, CliError> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let format = match cli.format {
        Some(f) => f,
        None => match config.string("format")? {
            Some(name) => Format::from_str(&name, true).map_err(|_| {
                CliError::Usage(format!("config format {name:?} is not plain, json or csv"))
            })?,
            None => Format::Plain,
        },
    };
    let unsafe_cap = cli.unsafe_cap || config.bool("unsafe-cap")?.unwrap_or(false);
    let limits = if unsafe_cap {
        eprintln!("warning: resource caps disabled; large inputs may take a very long time");
        Limits::unbounded()
    } else {
        Limits::default()
    };
    Ok(Settings {
        format,
        limits,
        config,
    })
}

fn run(cli: Cli) -> Result<String, CliError> {
    let settings = settings(&cli)?;
    match cli.command {
        Command::Seq { name, max_n, r, s } => commands::seq(&settings, name, max_n, r, s),
        Command::NormalOrder { expr, q } => commands::normal_order(&settings, &expr, q),
        Command::Graphs {
            lines,
            vertex,
            origin,
            series,
        } => commands::graphs(&settings, lines, &vertex, &origin, series),
        Command::Partitions { n } => commands::partitions(&settings, n),
        Command::Verify {
            max_n,
            prec,
            corrupt_stirling,
        } => commands::verify(&settings, max_n, prec, corrupt_stirling),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Verification { output, .. } = &e {
                print!("{output}");
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
