//! `atomkit`: certificate reports for frames, L-frames and sampling sets.
//!
//! Exit codes: 0 certificate passes, 1 computed but fails, 2 input or schema
//! error, 3 numerical failure.

mod canonical;
mod commands;
mod doc;

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use atomkit::numeric::{RankCutoff, Tolerances};
use clap::Parser;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::canonical::float;
use crate::commands::Command;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] atomkit::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(e) if e.is_numerical() => 3,
            CliError::Library(atomkit::Error::NotAFrame { .. } | atomkit::Error::NotAtomicForL { .. }) => 1,
            _ => 2,
        }
    }
}

/// Overrides that take precedence over the corresponding document fields.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub samples: Option<usize>,
    pub degree: Option<usize>,
    pub norm_mode: Option<doc::NormModeChoice>,
}

#[derive(Debug, Parser)]
#[command(name = "atomkit", version, about = "Frame, L-frame and sampling certificates")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Problem document (`-` for standard input).
    #[arg(long, default_value = "-")]
    input: String,
    /// Report destination (`-` for standard output).
    #[arg(long, default_value = "-")]
    output: String,
    /// Probe vectors for verify-theorem5.
    #[arg(long)]
    samples: Option<usize>,
    /// Truncation degree N for sampling commands.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_enum)]
    norm_mode: Option<doc::NormModeChoice>,
}

fn read_input(path: &str) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    if path == "-" {
        io::stdin().read_to_end(&mut buf).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
    } else {
        buf = fs::read(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    }
    Ok(buf)
}

fn write_output(path: &str, text: &str) -> Result<(), CliError> {
    if path == "-" {
        io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Input(format!("stdout: {e}")))
    } else {
        fs::write(path, text).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

fn tolerances_json(t: &Tolerances) -> Value {
    let cutoff = match t.rank_cutoff_rel {
        RankCutoff::Auto => json!("auto"),
        RankCutoff::Relative(r) => float(r),
    };
    json!({
        "rank_cutoff_rel": cutoff,
        "residual_tol": float(t.residual_tol),
        "bound_slack": float(t.bound_slack),
    })
}

fn report(cmd: Command, input: &[u8], tol: &Tolerances, mut body: Map<String, Value>, pass: bool) -> String {
    body.insert("command".into(), json!(cmd.name()));
    body.insert("input_sha256".into(), json!(hex::encode(Sha256::digest(input))));
    body.insert("toolkit_version".into(), json!(env!("CARGO_PKG_VERSION")));
    body.insert("tolerances".into(), tolerances_json(tol));
    body.insert("scope".into(), json!(commands::scope_note(cmd)));
    body.insert("pass".into(), json!(pass));
    canonical::to_string(&Value::Object(body))
}

fn execute(args: &Args) -> Result<u8, CliError> {
    let input = read_input(&args.input)?;
    let doc = doc::ProblemDocument::parse(&input)?;
    let tol = doc.tolerances()?;
    let flags = Flags { samples: args.samples, degree: args.degree, norm_mode: args.norm_mode };
    let (body, pass) = match commands::run(args.command, &doc, &flags, &tol) {
        Ok(o) => (o.body, o.pass),
        Err(e) if e.exit_code() == 1 => {
            eprintln!("atomkit: {e}");
            let mut m = Map::new();
            m.insert("failure".into(), json!(e.to_string()));
            (m, false)
        }
        Err(e) => return Err(e),
    };
    write_output(&args.output, &report(args.command, &input, &tol, body, pass))?;
    Ok(if pass { 0 } else { 1 })
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("atomkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
