use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

mod commands;
mod config;
mod error;
mod output;

use commands::CommandResult;
use config::{Format, RunConfig};
use error::{config_error, CliError, CliResult};
use output::write_output;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Derivatives of the fundamental function at sample points.
    Eval,
    /// Sign scan of one derivative over an interval.
    Verify,
    /// Hankel determinants, definiteness and determinant sign changes.
    Hankel,
    /// Turán ratio with its lower and upper bounds.
    Turan,
    /// Moment transform, Hausdorff check and measure recovery.
    Moments,
    /// Monotonicity certificate.
    Certify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Verify => "verify",
            Command::Hankel => "hankel",
            Command::Turan => "turan",
            Command::Moments => "moments",
            Command::Certify => "certify",
        }
    }
}

/// Evaluate fundamental functions of linear differential operators and check
/// their inequalities.
#[derive(Debug, Parser)]
#[command(name = "expfun", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Exit with status 1 when a checked property fails.
    #[arg(long)]
    assert: bool,
    /// Output file; overrides `output.path` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; overrides `output.format` in the config.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("expfun: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let config = RunConfig::load(&cli.config)?;
    if let Some(name) = &config.command {
        if name != cli.command.name() {
            return Err(config_error(format!("config is for `{name}`, invoked as `{}`", cli.command.name())));
        }
    }
    let CommandResult { output, violations } = match cli.command {
        Command::Eval => commands::cmd_eval(&config)?,
        Command::Verify => commands::cmd_verify(&config)?,
        Command::Hankel => commands::cmd_hankel(&config)?,
        Command::Turan => commands::cmd_turan(&config)?,
        Command::Moments => commands::cmd_moments(&config)?,
        Command::Certify => commands::cmd_certify(&config)?,
    };
    let format = cli.format.or(config.output.format).unwrap_or(Format::Csv);
    let path = cli.out.as_deref().or(config.output.path.as_deref());
    write_output(&output.render(format)?, path)?;

    if cli.assert && !violations.is_empty() {
        for v in &violations[1..] {
            eprintln!("expfun: assertion failed: {v}");
        }
        return Err(CliError::Assertion(violations[0].clone()));
    }
    Ok(())
}
