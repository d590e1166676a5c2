//! Command-line front end: reads game and network files, runs the analyses
//! of `cbr_core` and renders reports, DOT graphs and CSV tables.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
use args::{Command, Common};
use commands::Context;
pub use error::CliError;

/// Result of one invocation: exit code plus what would go to stdout/stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn load(common: &Common) -> Result<Context, CliError> {
    let text = std::fs::read_to_string(&common.input)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", common.input.display())))?;
    let doc = input::parse_document(&text).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", common.input.display())),
        other => other,
    })?;
    Ok(Context::new(doc, common.mode))
}

fn common(cli: &Cli) -> &Common {
    match &cli.command {
        Command::Equilibria(c) | Command::Graph(c) => c,
        Command::Chain(a) => &a.common,
        Command::Stable(a) => &a.common,
        Command::Simulate(a) => &a.common,
        Command::Netform(a) => &a.common,
    }
}

/// Runs a parsed command and returns the artifact text.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let ctx = load(common(cli))?;
    match &cli.command {
        Command::Equilibria(c) => commands::equilibria(&ctx, c),
        Command::Graph(c) => commands::graph(&ctx, c),
        Command::Chain(a) => commands::chain(&ctx, a),
        Command::Stable(a) => commands::stable(&ctx, a),
        Command::Simulate(a) => commands::simulate_cmd(&ctx, a),
        Command::Netform(a) => commands::netform(&ctx, a),
    }
}

/// Full invocation from raw arguments (including the program name). The
/// artifact goes to `--output` when given, otherwise to stdout.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = execute(&cli).and_then(|text| match &common(&cli).output {
        Some(path) => std::fs::write(path, &text)
            .map(|_| String::new())
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => Ok(text),
    });
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("cbr: {e}\n") },
    }
}
