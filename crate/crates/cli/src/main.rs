use std::process::ExitCode;

use clap::Parser;
use trfocus_cli::{configure_threads, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| execute(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("trfocus: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
