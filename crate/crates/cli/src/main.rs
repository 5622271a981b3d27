//! `degdiv`: generate graphs, run the exact oracles and constructions, and
//! drive seeded random-graph sweeps.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "degdiv", version, about = "Distinct degrees in induced subgraphs")]
struct Cli {
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true, env = "DEGDIV_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    Turan,
    IteratedTuran,
    Gnp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum What {
    F,
    Hom,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a graph from one of the built-in families as an edge list.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Number of parts (turan).
        #[arg(long)]
        k: Option<usize>,
        /// Number of blocks (iterated-turan).
        #[arg(long)]
        b: Option<usize>,
        /// Cliques per block (iterated-turan); defaults to √n.
        #[arg(long)]
        inner: Option<usize>,
        /// Edge probability (gnp).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact f and/or hom of a small graph.
    Exact {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        what: What,
        #[arg(long, default_value_t = degdiv::exact::DEFAULT_F_CAP)]
        f_cap: usize,
        #[arg(long, default_value_t = degdiv::exact::DEFAULT_HOM_CAP)]
        hom_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for many distinct degrees with the construction pipeline.
    Find {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Pipeline configuration (JSON).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate bad(u, v) for a distribution.
    Bad {
        #[arg(long)]
        graph: PathBuf,
        /// Distribution as JSON, or `@FILE` to read it from a file.
        #[arg(long)]
        dist: String,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        /// Target set S as comma-separated indices; defaults to the
        /// distribution's domain.
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<usize>>,
        #[arg(long, default_value_t = degdiv::distributions::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 1.0)]
        half_width: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a G(n, p) sweep and write sweep.csv, summary.json and manifest.json.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check a distinct-degree witness (JSON with "S" and "U") against a graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) -> anyhow::Result<()> {
    if let Some(t) = threads {
        if t == 0 {
            anyhow::bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: Option<usize>) -> anyhow::Result<()> {
    Ok(())
}

/// 2 for bad input, 3 for inputs beyond an oracle's cap, 4 when a
/// construction or verification fails, 1 otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    use degdiv::Error::*;
    if e.downcast_ref::<commands::Usage>().is_some() {
        return 2;
    }
    if e.downcast_ref::<commands::Rejected>().is_some() {
        return 4;
    }
    if e.downcast_ref::<serde_json::Error>().is_some() {
        return 2;
    }
    match e.downcast_ref::<degdiv::Error>() {
        Some(TooLarge { .. }) => 3,
        Some(
            InvalidSet(_) | InvalidPair(_) | InvalidParams(_) | InvalidDomain(_) | InsufficientTrials { .. }
            | Parse { .. },
        ) => 2,
        Some(
            InvalidWitness(_)
            | NotDiverse(_)
            | InsufficientDegree { .. }
            | ConstructionFailed { .. }
            | NotConvenient(_)
            | SeparationFailed(_)
            | RealizationFailed(_)
            | NotPrivate(_),
        ) => 4,
        Some(Io(_) | Csv(_)) | None => 1,
    }
}
