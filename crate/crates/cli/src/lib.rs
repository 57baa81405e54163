//! `cayleylab` command-line front end.

mod args;
mod commands;
pub mod serialize;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{param_range, rational, Cli, Command, Format, ParamRange, RunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(cayleylab::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_limit() => EXIT_CAP,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<cayleylab::Error> for CliError {
    fn from(e: cayleylab::Error) -> Self {
        CliError::Core(e)
    }
}

/// What a command printed and the exit code it asks for.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Output goes to stdout or `--output`; diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli).and_then(|out| emit(&cli.config, &out.stdout).map(|()| out.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command without printing its output.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let config = &cli.config;
    if let Some(cap) = config.cap_elements {
        std::env::set_var(cayleylab::group::CAP_ENV, cap.to_string());
    }
    if let Some(n) = config.threads {
        // Fails only when a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    commands::dispatch(&cli.command, config)
}

fn emit(config: &RunConfig, text: &str) -> Result<(), CliError> {
    match &config.output {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            CliError::Usage(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|()| out.flush()).map_err(CliError::Io)
        }
    }
}
