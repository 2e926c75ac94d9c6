use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cone_poisson::cli::{run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let outcome = run(&cli);
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.report.render(cli.format).as_bytes());
    let _ = out.flush();
    ExitCode::from(outcome.code as u8)
}
