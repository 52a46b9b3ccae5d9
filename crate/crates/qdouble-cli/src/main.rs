//! Batch driver for the quantum double toolkit. Builds a group, lattice,
//! and channel from a JSON config (or from flags for quick looks), runs
//! the requested experiments, and writes one JSON report per experiment.
//!
//! Exit status: 0 all experiments passed their internal checks, 1 config
//! errors or failed checks, 2 an enumeration or dimension budget refused
//! the job.

mod config;
mod experiments;
mod report;
mod tables;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use config::{
    merge_overrides, parse_channel_kind, resolve, ChannelSpec, EdgeSelection, Experiment,
    ExperimentConfig, LatticeSpec, Overrides,
};
use qdouble::group::GroupSpec;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "qdouble",
    version,
    about = "Exact quantum double model simulator: ground spaces, modular data, decoherence diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiments listed in a JSON config file.
    Run {
        config: PathBuf,
        /// Builtin group name (Z<n>, S3, D4, Q8); the config wins on conflict.
        #[arg(long)]
        group: Option<String>,
        /// Torus size, e.g. 2x2.
        #[arg(long)]
        lattice: Option<String>,
        /// Decoherence kind: z or x.
        #[arg(long)]
        channel: Option<String>,
        /// Channel support: "all" or comma-separated edge indices.
        #[arg(long)]
        edges: Option<String>,
        /// Directory for per-experiment JSON reports (default: stdout).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also print aligned text tables.
        #[arg(long)]
        tables: bool,
    },
    /// Ground-space dimension: character-formula count vs direct enumeration.
    Gsd {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "2x2")]
        lattice: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tables: bool,
    },
    /// Modular S-matrix of the quantum double.
    Smatrix {
        #[arg(long)]
        group: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tables: bool,
    },
    /// Strong/weak symmetry audit of the decohered ground state.
    Audit {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "2x2")]
        lattice: String,
        #[arg(long, default_value = "z")]
        channel: String,
        #[arg(long, default_value = "all")]
        edges: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tables: bool,
    },
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            return 1;
        }
    };
    let (cfg, tables) = match assemble(cli.cmd) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 1;
        }
    };
    let resolved = match resolve(cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 1;
        }
    };
    let records = report::run_all(&resolved);
    if let Err(e) = report::write_reports(&resolved, &records, resolved.output.as_deref()) {
        eprintln!("error: {e:#}");
        return 1;
    }
    if tables {
        for (exp, rec) in &records {
            tables::print_tables(*exp, rec);
        }
    }
    report::exit_code(&records)
}

/// Turn a subcommand into a full config plus the tables flag. `run` loads
/// the file and merges flag overrides; the shorthand subcommands build a
/// one-experiment config directly.
fn assemble(cmd: Cmd) -> anyhow::Result<(ExperimentConfig, bool)> {
    match cmd {
        Cmd::Run { config, group, lattice, channel, edges, output, tables } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            let overrides = Overrides { group, lattice, channel, edges, output };
            for warning in merge_overrides(&mut cfg, &overrides)? {
                eprintln!("warning: {warning}");
            }
            Ok((cfg, tables))
        }
        Cmd::Gsd { group, lattice, output, tables } => {
            Ok((single(Experiment::Gsd, group, &lattice, None, output)?, tables))
        }
        Cmd::Smatrix { group, output, tables } => {
            Ok((single(Experiment::Smatrix, group, "2x2", None, output)?, tables))
        }
        Cmd::Audit { group, lattice, channel, edges, output, tables } => {
            let spec = ChannelSpec {
                kind: parse_channel_kind(&channel)?,
                edges: EdgeSelection::parse(&edges)?,
            };
            Ok((single(Experiment::SymmetryAudit, group, &lattice, Some(spec), output)?, tables))
        }
    }
}

fn single(
    exp: Experiment,
    group: String,
    lattice: &str,
    channel: Option<ChannelSpec>,
    output: Option<PathBuf>,
) -> anyhow::Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        schema_version: None,
        group: Some(GroupSpec::Builtin { builtin: group }),
        lattice: Some(LatticeSpec::parse(lattice)?),
        experiments: vec![exp],
        channel,
        anomaly: None,
        swssb: None,
        tolerances: None,
        output,
    })
}
