use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hcf_cli::commands::{emit, output_args, run};
use hcf_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|outcome| emit(&outcome, output_args(&cli.command)));
    match result {
        Ok(Some(text)) => {
            // a closed pipe is not worth a panic
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code())
        }
    }
}
