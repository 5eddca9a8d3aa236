//! `sgx`: build semigroups, run the gallery checks, test and synthesize terms.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "sgx", version, about = "Finite semigroups, identification minors and term functions")]
struct Cli {
    /// Refuse universes with more elements than this.
    #[arg(long, global = true, default_value_t = 4096)]
    max_order: usize,
    /// Refuse function tables with more cells than this.
    #[arg(long, global = true, default_value_t = 1 << 26)]
    max_cells: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a semigroup and write it as .sg.json.
    Build(BuildArgs),
    /// Run a named end-to-end check and write report.json.
    Verify(VerifyArgs),
    /// Check whether every identification minor of a function is a term function.
    Imt(ImtArgs),
    /// Recover a term from a function's low-support restrictions.
    Synthesize(SynthArgs),
    /// Search for IMT functions that are not term functions, arity by arity.
    Probe(ProbeArgs),
    /// Describe a .sg.json or .sgfn file.
    Inspect(InspectArgs),
    /// List or check a catalog directory.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(subcommand)]
    kind: BuildKind,
    /// Output file.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Also record the result in this catalog directory.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Catalog entry name (defaults to the output file stem).
    #[arg(long, global = true)]
    name: Option<String>,
}

#[derive(Debug, Subcommand)]
enum BuildKind {
    /// Free d-nilpotent semigroup over an alphabet of single letters.
    Fn {
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        d: usize,
        /// Identify two words (closed to the least congruence), e.g. "abab=baba".
        #[arg(long = "merge")]
        merges: Vec<String>,
        #[arg(long)]
        adjoin_one: bool,
        /// With --adjoin-one, keep an existing identity instead of adding a fresh one.
        #[arg(long)]
        reuse_identity: bool,
    },
    /// Quotient by the least congruence containing the merges.
    Quotient {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "merge", required = true)]
        merges: Vec<String>,
    },
    AdjoinOne {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        reuse_identity: bool,
    },
    AdjoinZero {
        #[arg(long)]
        input: PathBuf,
    },
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    ZeroUnion {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Rees quotient by the ideal with the given element labels (comma separated).
    Rees {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        ideal: Vec<String>,
    },
    /// A built-in example: theta, semilattice, trivial, z2.
    Named { which: String },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// thm4, semilattice, propagation or identities.
    check: String,
    #[arg(long, default_value_t = 4)]
    arity: usize,
    #[arg(long, default_value_t = sgx_core::gallery::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = sgx_core::gallery::DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(short, long, default_value = "report.json")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct ImtArgs {
    semigroup: PathBuf,
    /// Function table (.sgfn).
    #[arg(long, conflicts_with = "oracle", required_unless_present = "oracle")]
    function: Option<PathBuf>,
    /// `term:<word>` or `table:<path>`.
    #[arg(long)]
    oracle: Option<String>,
    /// Arity for a term oracle (defaults to the largest variable).
    #[arg(long)]
    arity: Option<usize>,
    /// closure, pruned or auto.
    #[arg(long, default_value = "auto")]
    strategy: String,
}

#[derive(Debug, Args)]
struct SynthArgs {
    semigroup: PathBuf,
    #[arg(long)]
    oracle: String,
    #[arg(long)]
    arity: Option<usize>,
    /// free, four or auto (4-nilpotent path when d <= 4).
    #[arg(long, default_value = "auto")]
    path: String,
    #[arg(long, default_value_t = sgx_core::synth::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    semigroup: PathBuf,
    #[arg(long)]
    max_arity: usize,
    /// Write the report as JSON.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InspectArgs {
    file: PathBuf,
    /// Universe to check a .sgfn header against.
    #[arg(long)]
    universe: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    #[command(subcommand)]
    action: CatalogAction,
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    List { dir: PathBuf },
    /// Exit 1 if any entry is missing or fails its checksum.
    Verify { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
