use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eigvar::TensorKind;

#[derive(Debug, Parser)]
#[command(
    name = "eigvar",
    version,
    about = "Eigenvectors of hypergraph tensors at the least H-eigenvalue"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Adjacency,
    Laplacian,
    Signless,
}

impl From<Kind> for TensorKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Adjacency => TensorKind::Adjacency,
            Kind::Laplacian => TensorKind::Laplacian,
            Kind::Signless => TensorKind::Signless,
        }
    }
}

#[derive(Debug, Args)]
pub struct PerronArgs {
    /// Stopping tolerance of the power iteration.
    #[arg(long, default_value_t = 1e-12)]
    pub perron_tol: f64,

    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral radius and Perron vector (for the Laplacian: λ_min = s − ρ(B)).
    Spectral {
        #[arg(long, value_enum)]
        tensor: Kind,
        #[command(flatten)]
        perron: PerronArgs,
        /// Include the tensor itself in the report.
        #[arg(long)]
        dump_tensor: bool,
        input: PathBuf,
    },
    /// Smith normal form of the incidence matrix.
    Snf {
        #[arg(long, value_enum, default_value_t = Kind::Adjacency)]
        tensor: Kind,
        /// Modulus; defaults to the uniformity.
        #[arg(long = "mod")]
        modulus: Option<u64>,
        /// Emit and check the unimodular transforms.
        #[arg(long)]
        transforms: bool,
        input: PathBuf,
    },
    /// Enumerate the eigenvectors at λ_min (laplacian), ρ (adjacency, signless)
    /// or 0 (signless with --at-zero).
    Eigenvariety {
        #[arg(long, value_enum)]
        tensor: Kind,
        #[arg(long)]
        at_zero: bool,
        /// Residual acceptance threshold.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        perron: PerronArgs,
        /// Largest kernel to enumerate.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Also emit the complex eigenvectors.
        #[arg(long)]
        emit_vectors: bool,
        input: PathBuf,
    },
    /// Connectivity, cored, odd-bipartite and odd-colorable checks.
    Classify { input: PathBuf },
    /// Cross-check the Smith-form route against brute-force scans.
    Verify {
        #[arg(long, value_enum)]
        tensor: Kind,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        perron: PerronArgs,
        /// Largest number of candidates either scan may try.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Include wall-clock seconds (makes output non-reproducible).
        #[arg(long)]
        timings: bool,
        input: PathBuf,
    },
    /// Write a generated hypergraph in HGF.
    Gen {
        #[command(subcommand)]
        family: Family,
        /// Output path; stdout when omitted.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Complete m-uniform hypergraph on n vertices.
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Generalized power hypergraph G^{m,m/2} of a simple graph.
    Power {
        /// Simple graph file: "n" then one "u v" per line.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: usize,
    },
}
