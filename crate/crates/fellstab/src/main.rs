use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fellstab::commands::{self, CommandOutput, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "fellstab",
    about = "Fell bundles over finite groupoids: validation, stabilization, and k-graph primitive-ideal pipelines",
    version
)]
struct Cli {
    /// Absolute tolerance for all numerical checks.
    #[arg(long, global = true, default_value_t = fellstab::DEFAULT_TOLERANCE)]
    tolerance: f64,

    /// Depth cap per coordinate for bounded path searches.
    #[arg(long, global = true, default_value_t = fellstab::DEFAULT_DEPTH)]
    depth: usize,

    /// Number of worker threads for parallel verification sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write the report to this path as well as stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, default_value = "text", value_parser = ["text", "structured"])]
    format: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document of any kind (exit 0 iff valid).
    Validate { path: PathBuf },
    /// Run the full stabilization pipeline on a bundle document.
    Stabilize {
        path: PathBuf,
        /// Debug: corrupt the solved action at this arrow index to
        /// demonstrate detection.
        #[arg(long, hide = true)]
        corrupt_action: Option<usize>,
    },
    /// Primitive-ideal stratification of a pullback k-graph.
    Prim { pgraph: PathBuf, cocycle: PathBuf },
    /// k-graph combinatorics.
    #[command(subcommand)]
    Kgraph(KgraphCommand),
    /// Integer-lattice computations.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Cocycle computations.
    #[command(subcommand)]
    Cocycle(CocycleCommand),
}

#[derive(Subcommand)]
enum KgraphCommand {
    /// Bounded aperiodicity and strong-aperiodicity verdicts.
    Aperiodicity { path: PathBuf },
    /// Saturated hereditary vertex sets (the gauge-invariant ideal lattice).
    Ideals { path: PathBuf },
    /// Maximal tails.
    Tails { path: PathBuf },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Smith normal form of an integer matrix document.
    Snf { path: PathBuf },
}

#[derive(Subcommand)]
enum CocycleCommand {
    /// Symmetrizer subgroup and dual shape of a rational cocycle.
    Symmetrizer { path: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // ignore failure when a pool already exists (e.g. repeated init)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let format = if cli.format == "structured" {
        OutputFormat::Structured
    } else {
        OutputFormat::Text
    };
    let mut cfg = RunConfig {
        tolerance: cli.tolerance,
        depth: cli.depth,
        format,
        corrupt_action: None,
    };
    let out: CommandOutput = match &cli.command {
        Command::Validate { path } => commands::cmd_validate(path, &cfg),
        Command::Stabilize {
            path,
            corrupt_action,
        } => {
            cfg.corrupt_action = *corrupt_action;
            commands::cmd_stabilize(path, &cfg)
        }
        Command::Prim { pgraph, cocycle } => commands::cmd_prim(pgraph, cocycle, &cfg),
        Command::Kgraph(KgraphCommand::Aperiodicity { path }) => {
            commands::cmd_kgraph_aperiodicity(path, &cfg)
        }
        Command::Kgraph(KgraphCommand::Ideals { path }) => commands::cmd_kgraph_ideals(path, &cfg),
        Command::Kgraph(KgraphCommand::Tails { path }) => commands::cmd_kgraph_tails(path, &cfg),
        Command::Lattice(LatticeCommand::Snf { path }) => commands::cmd_lattice_snf(path, &cfg),
        Command::Cocycle(CocycleCommand::Symmetrizer { path }) => {
            commands::cmd_cocycle_symmetrizer(path, &cfg)
        }
    };
    let rendered = out.rendered(cfg.format);
    print!("{rendered}");
    if let Some(report_path) = &cli.report {
        if let Err(e) = std::fs::write(report_path, rendered) {
            eprintln!(
                "error: could not write report to {}: {e}",
                report_path.display()
            );
            return ExitCode::from(commands::EXIT_VALIDATION as u8);
        }
    }
    ExitCode::from(out.exit as u8)
}
