use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use elastica_cli::config::OUT_DIR_ENV;
use elastica_cli::converge::Sweep;
use elastica_cli::output::{format_eoc, write_eoc, EOC_FILE};
use elastica_cli::presets::preset_listing;
use elastica_cli::{cmd_run, CliError, Result};

#[derive(Parser)]
#[command(name = "elastica", version, about = "Elastic flow of closed curves with Dirichlet-energy mesh redistribution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one flow from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Shrinking-circle convergence table with m_T = N^2.
    ConvergeCircle {
        /// Strictly increasing vertex counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 1.5)]
        r0: f64,
        #[arg(long = "t", default_value_t = 1.0)]
        t_final: f64,
        /// Directory for eoc.csv (default: $ELASTICA_OUT_DIR, then `.`).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// List built-in presets and their defaults.
    PresetList,
}

fn converge(sweep: Sweep, out_dir: Option<PathBuf>) -> Result<()> {
    let outcome = sweep.run()?;
    if let Some(table) = &outcome.table {
        let dir = out_dir
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
        write_eoc(&dir.join(EOC_FILE), table)?;
        print!("{}", format_eoc(table));
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => cmd_run(&config).map(|r| {
            println!(
                "{} snapshots, final energy {:.6e}, final sigma {:.6}; manifest {}",
                r.snapshots,
                r.final_energy,
                r.final_sigma,
                r.manifest.display()
            );
        }),
        Command::ConvergeCircle {
            n_list,
            lambda,
            r0,
            t_final,
            out_dir,
        } => converge(
            Sweep {
                vertex_counts: n_list,
                lambda,
                r0,
                t_final,
            },
            out_dir,
        ),
        Command::PresetList => {
            print!("{}", preset_listing());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
