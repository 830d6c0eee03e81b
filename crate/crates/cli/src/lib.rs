//! Command-line front end: argument parsing, input loading and table output.
//!
//! [`run`] is the whole program minus process exit, so tests can drive it
//! with in-memory streams.

pub mod args;
pub mod commands;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use effcoul_core::data::{default_references, load_bethe_table};
use effcoul_core::{load_config, BetheLogTable};

use crate::args::Cli;
use crate::commands::{execute, read_references, Context};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Data goes to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            return if informational {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            } else {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            };
        }
    };

    let result = load_context(&cli).and_then(|ctx| execute(&ctx, &cli.command).map_err(|f| f.0));
    let table = match result {
        Ok(table) => table,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            return EXIT_FAILURE;
        }
    };
    match table
        .emit(cli.common.format.into(), out)
        .and_then(|()| out.flush())
    {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: writing output: {e}");
            EXIT_FAILURE
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_context(cli: &Cli) -> Result<Context, String> {
    let common = &cli.common;
    let config = match &common.config {
        Some(path) => {
            load_config(Some(&read(path)?)).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => load_config(None).map_err(|e| e.to_string())?,
    };
    let bethe = match &common.bethe {
        Some(path) => {
            load_bethe_table(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => BetheLogTable::shipped(),
    };
    let references = if common.no_references {
        None
    } else {
        Some(match &common.references {
            Some(path) => {
                read_references(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => default_references(),
        })
    };
    Ok(Context {
        config,
        bethe,
        references,
    })
}
