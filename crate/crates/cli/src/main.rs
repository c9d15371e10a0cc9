use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use spdgeom_cli::commands::Cli;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    if let Err(e) = Cli::try_parse_from(&argv) {
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            e.exit();
        }
    }
    let report = spdgeom_cli::run(argv);
    for line in spdgeom_cli::log_lines(&report) {
        eprintln!("{line}");
    }
    println!("{}", spdgeom_cli::render(&report));
    ExitCode::from(report.exit_code as u8)
}
