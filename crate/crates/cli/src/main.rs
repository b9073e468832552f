mod codec;
mod commands;
mod doc;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use serde_json::{json, Value};

use commands::{canonical, run, Command, Options, Report, Status};

/// Exact extension of scalars and Galois descent, driven by JSON documents.
///
/// Every run writes a certificate. Exit status: 0 pass, 1 mathematical
/// failure, 2 usage or schema error.
#[derive(Parser, Debug)]
#[command(name = "galdesc", version)]
struct Cli {
    command: Command,
    /// Input document (optional for selftest).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Certificate destination; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for the randomized suites.
    #[arg(long)]
    seed: Option<u64>,
    /// Accept number-field moduli whose irreducibility cannot be verified.
    #[arg(long)]
    assert_irreducible: bool,
}

fn read_input(path: &PathBuf) -> Result<Value, (String, String)> {
    let text = fs::read_to_string(path).map_err(|e| (String::new(), format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| (String::new(), format!("malformed JSON: {e}")))
}

fn error_report(command: Command, pointer: String, message: String) -> Report {
    Report {
        command,
        status: Status::Error,
        summary: message.clone(),
        witnesses: json!({}),
        input: Value::Null,
        field: None,
        error: Some(json!({ "pointer": pointer, "message": message })),
    }
}

fn write_certificate(cli: &Cli, report: &Report) -> anyhow::Result<()> {
    let text = canonical(&report.certificate());
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        seed: cli.seed,
        assert_irreducible: cli.assert_irreducible,
    };
    let report = match &cli.input {
        Some(path) => match read_input(path) {
            Ok(v) => run(cli.command, Some(&v), opts),
            Err((pointer, message)) => error_report(cli.command, pointer, message),
        },
        None => run(cli.command, None, opts),
    };
    if let Err(e) = write_certificate(&cli, &report) {
        eprintln!("galdesc: {e:#}");
        return ExitCode::from(2);
    }
    let line = format!("{}: {} ({})", cli.command.name(), report.status.name(), report.summary);
    if cli.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    ExitCode::from(report.status.exit_code())
}
