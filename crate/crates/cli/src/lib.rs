//! Command-line front end: argument handling, dispatch and report emission.

pub mod commands;
pub mod config;
pub mod emit;

use std::fs::File;
use std::io::{self, BufWriter};

use andor_core::scalar::{float_json, rational_string};
use andor_core::Error;
use serde_json::json;

pub use config::{Cli, Command, Emit, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;

fn config_json(cfg: &RunConfig) -> serde_json::Value {
    json!({
        "gate": cfg.shape.root_gate(),
        "height": cfg.shape.height(),
        "r": rational_string(&cfg.r),
        "grid": cfg.grid,
        "tol": float_json(cfg.tol),
        "seed": cfg.seed,
    })
}

/// Runs one command and writes its report; returns the process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let report = match commands::dispatch(cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("andor: {e}");
            return match e {
                Error::Input(_) | Error::Domain(_) => EXIT_USAGE,
                Error::Capability(_) => EXIT_CAPABILITY,
                Error::Contract(_) => EXIT_CHECK_FAILED,
            };
        }
    };
    let doc = emit::document(cfg.command.name(), config_json(cfg), &report);
    let written = match &cfg.output_path {
        Some(path) => File::create(path)
            .and_then(|f| emit::write_report(BufWriter::new(f), cfg.output_format, &doc, &report)),
        None => emit::write_report(io::stdout().lock(), cfg.output_format, &doc, &report),
    };
    if let Err(e) = written {
        eprintln!("andor: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if report.ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
