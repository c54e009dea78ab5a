use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lascat_cli::{load, run_command, Command, CommandError, Flags, Format};

/// Classifying spaces, fundamental groups and Lascar groups of finite categories.
#[derive(Parser, Debug)]
#[command(name = "lascat", version)]
struct Cli {
    command: Command,
    /// Input file; repeatable. Without one the bundled corpus is used.
    #[arg(long)]
    input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    flags: Flags,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ws = match load(&cli.input) {
        Ok(ws) => ws,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(CommandError::EXIT_CODE as u8);
        }
    };
    match run_command(&ws, cli.command, &cli.flags) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CommandError::EXIT_CODE as u8)
        }
    }
}
