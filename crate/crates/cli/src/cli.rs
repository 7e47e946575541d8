use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "metric-forge",
    version,
    about = "Metric operators for the tridiagonal non-Hermitian Hamiltonians H^(N)(λ)"
)]
pub struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the matrix H^(N)(λ).
    Hamiltonian(HamiltonianArgs),
    /// Eigenvalues of H^(N)(λ) over a grid of couplings.
    Spectrum(SpectrumArgs),
    /// Closed-form metric basis and its verification.
    #[command(subcommand)]
    Metric(MetricCommand),
    /// Positivity of Θ = Σ α_j M_j for one α or for random samples.
    Positivity(PositivityArgs),
    /// Matching-condition convergence and opaque-wall checks on large lattices.
    Continuum(ContinuumArgs),
}

#[derive(Debug, Args)]
pub struct HamiltonianArgs {
    /// Matrix size (even, at least 2).
    #[arg(long)]
    pub n: usize,
    /// Coupling, exact ("1/2", "0") or decimal ("0.5").
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: usize,
    /// start:stop:count with inclusive endpoints.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
}

#[derive(Debug, Subcommand)]
pub enum MetricCommand {
    /// Incidence matrices S_j and polynomial matrices M_j(λ).
    Basis(BasisArgs),
    /// Cross-check the closed form against the exact oracle; exit code = failed checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(long)]
    pub n: usize,
    /// Only this element (1-based).
    #[arg(long)]
    pub j: Option<usize>,
    /// Evaluate M_j at this coupling instead of printing polynomial coefficients.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    /// Exact coupling "p/q".
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Debug, Args)]
pub struct PositivityArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    /// Comma-separated α_1,…,α_N.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "sample", required_unless_present = "sample")]
    pub alpha: Option<String>,
    /// Number of random α samples.
    #[arg(long)]
    pub sample: Option<usize>,
    /// Seed for sampling.
    #[arg(long, default_value_t = 0, requires = "sample")]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ContinuumMode {
    /// Matching-condition residual and its fitted order in h.
    Matching,
    /// Ground-state amplitude next to the middle bond.
    OpaqueWall,
}

#[derive(Debug, Args)]
pub struct ContinuumArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    /// Comma-separated even sizes, increasing.
    #[arg(long, default_value = "40,80,160,320")]
    pub sizes: String,
    /// Eigenstate index, 0 = ground state.
    #[arg(long, default_value_t = 0)]
    pub state: usize,
    #[arg(long, value_enum, default_value_t = ContinuumMode::Matching)]
    pub mode: ContinuumMode,
}
