use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rlab_core::cli::{
    cmd_analyze, cmd_behrend, cmd_construct, cmd_core, cmd_report, cmd_verify, parse_hypergraph,
    RunCaps,
};
use rlab_core::Error;

/// Build and exactly verify partite hypergraph instances: analyze a
/// pattern, generate progression-free sets, construct packed instances,
/// and re-verify their combinatorial claims.
///
/// Exit codes: 0 all declared invariants verified, 1 verification failure,
/// 2 usage error, 3 cap or budget exceeded.
#[derive(Parser)]
#[command(name = "rlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArgs {
    /// Search-tree node budget for counting and homomorphism queries.
    #[arg(long, env = "RLAB_NODE_BUDGET", default_value_t = 200_000_000)]
    node_budget: u64,
    /// Reseeded retries for the randomized extension.
    #[arg(long, env = "RLAB_RETRY_CAP", default_value_t = 16)]
    retry_cap: usize,
    /// Work cap for the exhaustive solution-freeness oracle.
    #[arg(long, env = "RLAB_ORACLE_CAP", default_value_t = 20_000_000)]
    oracle_cap: u64,
    /// Use the algebraic disjoint design instead of the sampled one.
    #[arg(long, env = "RLAB_DETERMINISTIC_DESIGN")]
    deterministic_design: bool,
}

impl CapArgs {
    fn caps(&self) -> RunCaps {
        RunCaps {
            node_budget: self.node_budget,
            retry_cap: self.retry_cap,
            oracle_cap: self.oracle_cap,
            deterministic_design: self.deterministic_design,
        }
    }
}

#[derive(Args)]
struct IoArgs {
    /// Input hypergraph file (canonical text or JSON mirror).
    #[arg(long)]
    input: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long, env = "RLAB_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Partiteness, core reduction, and witness selection for a pattern.
    Analyze {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Core of a pattern with the retraction and embedding.
    Core {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Progression-free subset of [1..=m] for the given equation arity.
    Behrend {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        t: usize,
        /// Force oracle verification even past the default cap.
        #[arg(long)]
        verify: bool,
        #[arg(long, env = "RLAB_OUT")]
        out: Option<PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Build the packed instance for a pattern at part size n.
    Construct {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, env = "RLAB_N")]
        n: usize,
        #[arg(long, env = "RLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Re-verify an instance JSON against its declared structure.
    Verify {
        /// Instance JSON file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, env = "RLAB_OUT")]
        out: Option<PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// CSV scaling table over a grid of part sizes.
    Report {
        #[command(flatten)]
        io: IoArgs,
        /// Comma-separated part sizes, e.g. 30,60,90.
        #[arg(long, value_delimiter = ',')]
        n_grid: Vec<usize>,
        #[arg(long, env = "RLAB_SEED", default_value_t = 0)]
        seed: u64,
        /// Output format; only csv is supported for report.
        #[arg(long, default_value = "csv")]
        format: String,
        #[command(flatten)]
        caps: CapArgs,
    },
}

fn read_graph(path: &PathBuf) -> Result<rlab_core::KGraph, Error> {
    let text = fs::read_to_string(path)?;
    parse_hypergraph(&text)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => println!("{content}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Analyze { io, caps } => {
            let g = read_graph(&io.input)?;
            emit(&io.out, &cmd_analyze(&g, &caps.caps())?)?;
            Ok(0)
        }
        Command::Core { io, caps } => {
            let g = read_graph(&io.input)?;
            emit(&io.out, &cmd_core(&g, &caps.caps())?)?;
            Ok(0)
        }
        Command::Behrend {
            m,
            t,
            verify,
            out,
            caps,
        } => {
            emit(&out, &cmd_behrend(m, t, verify, &caps.caps())?)?;
            Ok(0)
        }
        Command::Construct { io, n, seed, caps } => {
            let g = read_graph(&io.input)?;
            emit(&io.out, &cmd_construct(&g, n, seed, &caps.caps())?)?;
            Ok(0)
        }
        Command::Verify { input, out, caps } => {
            let json = fs::read_to_string(&input)?;
            let (report, verdict) = cmd_verify(&json, &caps.caps())?;
            emit(&out, &report)?;
            Ok(verdict.exit_code())
        }
        Command::Report {
            io,
            n_grid,
            seed,
            format,
            caps,
        } => {
            if format != "csv" {
                return Err(Error::Parameter(format!(
                    "unsupported report format `{format}` (expected csv)"
                )));
            }
            let g = read_graph(&io.input)?;
            emit(&io.out, &cmd_report(&g, &n_grid, seed, &caps.caps())?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
