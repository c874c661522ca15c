use std::process::ExitCode;

use clap::Parser;
use equising_cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let out = run(&cli);
    if cli.common.json {
        print!("{}", out.report_text());
    } else {
        print!("{}", out.human);
    }
    if let Some(path) = &cli.common.report {
        if let Err(e) = std::fs::write(path, out.report_text()) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    ExitCode::from(out.exit_code as u8)
}
