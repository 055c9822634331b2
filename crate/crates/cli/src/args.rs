use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homport::ParticleStatistics;

#[derive(Debug, Parser)]
#[command(name = "homport", version, about = "Exact boson/fermion scattering through Bell multiport beam splitters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the N-port DFT (Bell multiport) matrix.
    Dft {
        #[arg(long)]
        n: usize,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Probability of one particle in every output port.
    Coincidence {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long, value_enum)]
        stats: Stats,
        #[arg(long)]
        json: bool,
        /// Lift the dimension caps.
        #[arg(long)]
        force: bool,
    },
    /// Full output distribution over Fock configurations.
    Distribution {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long, value_enum)]
        stats: Stats,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        force: bool,
    },
    /// Coincidence table over a range of DFT port counts.
    Sweep {
        #[arg(long)]
        min: usize,
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum)]
        stats: Stats,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        force: bool,
    },
    /// Cyclic-symmetry, parity and oracle cross-checks.
    Verify {
        #[arg(long = "n-max")]
        n_max: usize,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct MatrixSource {
    /// Use the N-port DFT matrix.
    #[arg(long)]
    pub n: Option<usize>,
    /// Read the transition matrix from a text file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Stats {
    Boson,
    Fermion,
}

impl From<Stats> for ParticleStatistics {
    fn from(s: Stats) -> Self {
        match s {
            Stats::Boson => ParticleStatistics::Boson,
            Stats::Fermion => ParticleStatistics::Fermion,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}
