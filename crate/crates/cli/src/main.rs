use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hil_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let result = execute(cli, &mut out).and_then(|_| out.flush().map_err(|e| hil_cli::CliError::io("<stdout>", e)));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            drop(out);
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
