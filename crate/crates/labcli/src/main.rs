use std::io::Write;
use std::process::ExitCode;

use labcli::cli::parse_args;
use labcli::commands::run;
use labcli::error::{CliError, EXIT_VIOLATION};

fn main_inner() -> Result<i32, CliError> {
    let cli = match parse_args(std::env::args_os()) {
        Ok(c) => c,
        Err(CliError::Help(msg)) => {
            print!("{msg}");
            return Ok(0);
        }
        Err(e) => return Err(e),
    };
    let report = run(&cli)?;
    let text = report.render(cli.global.output_format());
    match &cli.global.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, text.as_bytes())?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(if report.ok { 0 } else { EXIT_VIOLATION })
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("labcli: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
