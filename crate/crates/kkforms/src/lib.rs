//! Command-line side of kkforms: catalog listing, parallel verification runs
//! with JSON reports, and kink profile tables.
//!
//! Exit statuses are [`EXIT_PASS`], [`EXIT_FAIL`] and [`EXIT_CONFIG`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod listing;
pub mod profile;
pub mod report;
pub mod run;

pub use config::{parse_param, parse_sign, RunConfig, Selection};
pub use error::{CliError, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
pub use profile::{profile, Grid, Profile};
pub use report::{SuiteReport, SCHEMA_VERSION};
pub use run::verify;

use std::path::Path;

/// Write `text` to `path`, or to standard output when there is no path.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Output { path: p.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Output { path: "<stdout>".into(), source })
        }
    }
}
