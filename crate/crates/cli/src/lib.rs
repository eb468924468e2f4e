//! File formats and command dispatch behind the `mtlogloss` binary.
//!
//! A run is described completely by a [`RunManifest`]; the command line is
//! only one way to build it, and the sidecar written next to every output is
//! another.

pub mod args;
pub mod error;
pub mod format;
pub mod manifest;
pub mod pmf_file;
pub mod run;

pub use args::{Cli, Command, Scheme};
pub use error::{CliError, Result, EXIT_IO, EXIT_RUNTIME, EXIT_VALIDATION};
pub use format::{emit, fmt_sig, load_artifact, render, Artifact, Cell, Format, Table};
pub use manifest::{load_manifest, sidecar_path, write_sidecar, RunManifest};
pub use pmf_file::{load_pmf, parse_pmf};
pub use run::{compute, execute, Completed, Executed, Flag, XD_BOUND};

/// Builds the manifest a parsed command line asks for.
pub fn manifest_from(cli: Cli) -> Result<RunManifest> {
    match (cli.manifest, cli.command) {
        (Some(path), _) => load_manifest(&path),
        (None, Some(cmd)) => Ok(cmd.into_manifest()),
        (None, None) => Err(CliError::Usage("expected a subcommand or --manifest".into())),
    }
}
