mod config;
mod experiments;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::ExperimentConfig;
use crate::experiments::CliError;
use crate::table::OutputFormat;

#[derive(Parser)]
#[command(name = "szego-lab", version, about = "Hardy-space experiment driver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment from a JSON config and emit a result table.
    Run {
        /// Path to the JSON experiment config.
        #[arg(long)]
        config: PathBuf,
        /// Output path; overrides `output_path` from the config. Without
        /// either, the table goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            format,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", config.display())))?;
            let parsed: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("config: {e}")))?;
            let table = experiments::run(&parsed)?;
            let target = out.or_else(|| parsed.output_path.clone());
            match target {
                Some(path) => {
                    let mut file = std::fs::File::create(&path).map_err(|e| {
                        CliError::Io(format!("cannot create {}: {e}", path.display()))
                    })?;
                    table::emit(&table, format, &mut file)
                        .map_err(|e| CliError::Io(e.to_string()))?;
                }
                None => {
                    let stdout = std::io::stdout();
                    table::emit(&table, format, &mut stdout.lock())
                        .map_err(|e| CliError::Io(e.to_string()))?;
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
