//! `gausspacket`: squeeze parameters, moments, wave fields and self-checks
//! for Gaussian packets of a free mass or a harmonic oscillator.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gausspacket::verify::VerifyLevel;

use commands::CliError;
use config::{FileConfig, Format, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "gausspacket",
    version,
    about = "Travelling Gaussian wave packets as coherent squeezed states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON config file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// free | osc
    #[arg(long, global = true)]
    system: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    mass: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    hbar: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    p0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    dx0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    dp0: Option<f64>,
    /// Sign of the initial position-momentum correlation: + or -
    #[arg(long, global = true, allow_hyphen_values = true)]
    sign: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    xmin: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    xmax: Option<f64>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Significant digits, 1 to 17
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Fail instead of warning when the grid is too narrow
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Squeeze parameters, coherent amplitude and initial moments
    Params,
    /// Centroid, second moments and classical action on a time grid
    Moments {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t1: f64,
        /// Number of rows, endpoints included
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
    /// The wave function sampled on a grid at one time
    Wavefield {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
    },
    /// Time and depth of the minimum width of a contracting free packet
    Contractive {
        /// Also locate the minimum with the split-step integrator
        #[arg(long)]
        oracle: bool,
    },
    /// Run the numerical self-checks
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

fn overrides(c: &Common) -> Overrides {
    Overrides {
        system: c.system.clone(),
        mass: c.mass,
        omega: c.omega,
        hbar: c.hbar,
        x0: c.x0,
        p0: c.p0,
        dx0: c.dx0,
        dp0: c.dp0,
        sign: c.sign.clone(),
        xmin: c.xmin,
        xmax: c.xmax,
        n: c.n,
        format: c.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
        precision: c.precision,
        strict: c.strict,
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let file = match &cli.common.config {
        Some(path) => config::load_file(path).map_err(CliError::invalid)?,
        None => FileConfig::default(),
    };
    let cfg = RunConfig::resolve(file, &overrides(&cli.common)).map_err(CliError::invalid)?;
    match cli.command {
        Command::Params => commands::params(&cfg),
        Command::Moments { t0, t1, steps } => commands::moment_table(&cfg, t0, t1, steps),
        Command::Wavefield { t } => commands::wavefield(&cfg, t),
        Command::Contractive { oracle } => commands::contractive(&cfg, oracle),
        Command::Verify { level } => commands::verify(
            &cfg,
            match level {
                LevelArg::Quick => VerifyLevel::Quick,
                LevelArg::Full => VerifyLevel::Full,
            },
        ),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = std::io::stdout().flush();
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
