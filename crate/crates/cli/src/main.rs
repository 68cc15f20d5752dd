use clap::error::ErrorKind;
use clap::Parser;

use phi_cli::{exit_code, render, run, Cli, EXIT_OK, EXIT_VALIDATION};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(&cli) {
        Ok(r) => {
            print!("{}", render(&r, cli.common.format));
            std::process::exit(exit_code(&r));
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}
