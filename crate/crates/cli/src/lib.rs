//! Configuration, output writers and subcommands behind the `elastica`
//! binary.

pub mod config;
pub mod converge;
mod error;
pub mod output;
pub mod presets;

pub use config::{load_config, parse_config, ResolvedConfig};
pub use error::{CliError, Result};

use std::path::{Path, PathBuf};

use elastica::flow::run;

/// Summary of a finished `run` subcommand.
#[derive(Debug)]
pub struct RunReport {
    pub manifest: PathBuf,
    pub snapshots: usize,
    pub final_energy: f64,
    pub final_sigma: f64,
}

/// Loads, runs and writes outputs. A mid-run failure still writes the
/// partial trajectory before returning the error.
pub fn cmd_run(config: &Path) -> Result<RunReport> {
    let cfg = load_config(config)?;
    match run(&cfg.run) {
        Ok(traj) => {
            let manifest = output::write_run(&cfg, &traj, None)?;
            let last = traj.last().expect("completed runs record the final step");
            Ok(RunReport {
                manifest,
                snapshots: traj.snapshots.len(),
                final_energy: last.diagnostics.energy,
                final_sigma: last.diagnostics.sigma,
            })
        }
        Err(failure) => {
            output::write_run(&cfg, &failure.partial, Some(&failure))?;
            Err(CliError::Run(format!(
                "{failure}; partial output in {}",
                cfg.out_dir.display()
            )))
        }
    }
}
