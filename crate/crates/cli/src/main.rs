use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use deformkit_cli::commands::{run, Cli, FileInputs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli, &FileInputs) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
