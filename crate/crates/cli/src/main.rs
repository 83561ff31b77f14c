use std::process::ExitCode;

use clap::Parser;

mod commands;

use commands::{Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match commands::run(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string(&out.payload).expect("payload serializes"));
            } else {
                println!("{}", out.human);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            report(&e, json);
            ExitCode::from(1)
        }
    }
}

fn report(e: &CliError, json: bool) {
    let body = serde_json::json!({ "error": e.code(), "detail": e.to_string() });
    if json {
        println!("{body}");
    } else {
        eprintln!("error [{}]: {e}", e.code());
    }
}
