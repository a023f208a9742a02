mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, MIN_SEGMENT};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FAIL: u8 = 2;
pub const EXIT_REFUSED: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.global.segment_size < MIN_SEGMENT {
        eprintln!("error: --segment-size must be at least {MIN_SEGMENT}");
        return ExitCode::from(EXIT_USAGE);
    }
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let start = Instant::now();
    let code = match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            commands::exit_code_for(&e)
        }
    };
    let record = serde_json::json!({
        "tool": "sqfree",
        "version": env!("CARGO_PKG_VERSION"),
        "config": &cli,
        "exit_code": code,
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    let written = match &cli.global.provenance {
        Some(path) => std::fs::write(path, format!("{record}\n")),
        None => writeln!(std::io::stderr(), "{record}"),
    };
    if let Err(e) = written {
        eprintln!("error: writing run record: {e}");
    }
    ExitCode::from(code)
}
