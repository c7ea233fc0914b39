mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use posetprod::linalg::FieldSpec;

use crate::commands::CliError;
use crate::report::render_table;

#[derive(Parser, Debug)]
#[command(name = "posetprod", version, about = "Polyhedral products over finite pointed posets")]
struct Cli {
    /// Print a text table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Omit the wall time, making the whole report byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_time: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Presentation,
    Limit,
    Fvector,
    Stanley,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a poset: reduced, simplicial, polyhedral, lower saturated, regular.
    Check { poset: PathBuf },
    /// Collapse comparable objects with equal vertex sets until reduced.
    Reduce { poset: PathBuf },
    /// The simplicial transform s(P) and the embedding P -> s(P).
    Stransform { poset: PathBuf },
    /// f-vectors of P and s(P), measured and predicted.
    Fvector { poset: PathBuf },
    /// Hilbert function of k[P] by several independent methods.
    Hilbert {
        poset: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, value_delimiter = ',', default_value = "presentation,limit,fvector")]
        method: Vec<Method>,
        #[arg(long, default_value = "q")]
        field: FieldSpec,
        /// Degree of each vertex generator.
        #[arg(long, default_value_t = 1)]
        grading: usize,
    },
    /// Higher limits of a diagram file.
    Limits {
        diagram: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value = "q")]
        field: FieldSpec,
    },
    /// Polyhedral tensor product and its higher limits.
    Tensor {
        poset: PathBuf,
        /// aug:<generator degree>, circle or random.
        #[arg(long, default_value = "aug:1")]
        collection: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value = "q")]
        field: FieldSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Homology of a polyhedral product of simplicial pairs.
    Homology {
        poset: PathBuf,
        /// A built-in pair name or a pair file.
        #[arg(long, default_value = "circle-point")]
        pair: String,
        /// Override the pair at one vertex: <vertex>=<pair>.
        #[arg(long = "per-vertex")]
        per_vertex: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "hocolim")]
        via: Vec<String>,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value = "2")]
        field: FieldSpec,
    },
    /// Run the acceptance battery.
    Suite {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match commands::run(&cli.command) {
        Ok(mut report) => {
            if !cli.no_time {
                report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
            }
            if cli.pretty {
                print!("{}", render_table(&report));
            } else {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
