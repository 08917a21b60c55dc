//! Command-line front end: model files in, canonical JSON and CSV reports out.
//!
//! Exit codes are `0` on success, `1` when a falsifiable assertion fails
//! (theorem contradiction, Robertson violation, broken feasibility floor,
//! failed variance expansion) and `2` on usage or input errors.

pub mod json;
pub mod model;
pub mod run;

use std::ffi::OsString;

use clap::Parser;

pub use model::{load_model, model_echo, parse_model, InputError, LoadedModel};
pub use run::{execute, parse_state, Cli, Command, Format, Report, SweepKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Parses `args` (including the program name), runs the command, writes
/// the report and returns the process exit code.
pub fn main_with<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let outcome = execute(&cli).and_then(|report| {
        run::emit(&report, cli.out.as_deref())?;
        Ok(report.falsified)
    });
    match outcome {
        Ok(false) => EXIT_OK,
        Ok(true) => EXIT_FALSIFIED,
        Err(e) => {
            eprintln!("wayaudit: {e}");
            EXIT_INPUT
        }
    }
}
