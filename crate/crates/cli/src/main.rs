mod commands;
mod input;
mod oracle;
mod schema;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

use twistab_core::json::{to_canonical_json, InputError};

use commands::Command;

/// Weighted twisted stable maps to BG: validation, stability, stabilization,
/// chambers and the abelian-group invariants of stacky P¹.
#[derive(Parser, Debug)]
#[command(name = "twistab", version)]
struct Cli {
    /// Print a JSON schema (curve, monodromy, group, input, record, stability, chambers, error)
    /// or, without a name, all of them keyed by name.
    #[arg(long, value_name = "NAME", num_args = 0..=1, default_missing_value = "all")]
    schema: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

/// Writes a line to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|()| out.flush());
}

fn fail(e: &InputError) -> ExitCode {
    eprintln!("{}", to_canonical_json(e));
    ExitCode::from(2)
}

fn print_schema(name: &str) -> Result<(), InputError> {
    if name == "all" {
        let all: serde_json::Map<String, Value> = schema::SCHEMAS
            .iter()
            .map(|(n, s)| (n.to_string(), serde_json::from_str(s).expect("shipped schema is JSON")))
            .collect();
        emit(&to_canonical_json(&all));
        return Ok(());
    }
    let text = schema::lookup(name)
        .ok_or_else(|| InputError::new("unknown_schema", format!("no schema named {name:?}"), "--schema"))?;
    let v: Value = serde_json::from_str(text).expect("shipped schema is JSON");
    emit(&to_canonical_json(&v));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return fail(&InputError::new("usage", first, "argv"));
        }
    };
    if let Some(name) = &cli.schema {
        return match print_schema(name) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(&e),
        };
    }
    let Some(cmd) = &cli.command else {
        return fail(&InputError::new("usage", "a subcommand is required (see --help)", "argv"));
    };
    match commands::run(cmd) {
        Ok(r) => {
            emit(&to_canonical_json(&r.value));
            if r.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(&e),
    }
}
