use std::io::Write;
use std::process::ExitCode;

use betafibre_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let result = run(&cli, &mut lock).and_then(|()| lock.flush().map_err(Into::into));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("betafibre: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
