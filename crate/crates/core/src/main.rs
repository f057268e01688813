use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use channel_uncertainty::cli::{run, Cli, EXIT_IO};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    if out.flush().is_err() && code == 0 {
        return ExitCode::from(EXIT_IO as u8);
    }
    ExitCode::from(code as u8)
}
