//! Command-line surface. Every command is serializable so artifacts can
//! embed a hash of the exact configuration that produced them.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Serialize)]
#[command(
    name = "tbrw",
    about = "Biased random walks: generators, covers, simulations, exact analysis, and bound checks",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Serialize)]
pub enum Command {
    /// Generate a graph file (plus a JSON sidecar with labels when the
    /// family has them)
    Generate(GenerateArgs),
    /// Build a randomized bounded-radius cover and validate it
    Cover(CoverArgs),
    /// Exact chain analysis: stationary law, hitting times, resistances
    Analyze(AnalyzeArgs),
    /// Monte Carlo walk simulation under a controller strategy
    Simulate(SimulateArgs),
    /// Run the recursive cover-exploration strategy
    Explore(ExploreArgs),
    /// Run the deterministic bound-verification suite
    Bench(BenchArgs),
}

#[derive(clap::Args, Serialize)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub family: Family,
    /// Output graph file
    #[arg(long, global = true)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    /// Output JSON sidecar for vertex labels
    #[arg(long, global = true)]
    #[serde(skip_serializing)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Subcommand, Serialize)]
pub enum Family {
    Path {
        #[arg(long)]
        n: usize,
    },
    Cycle {
        #[arg(long)]
        n: usize,
    },
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    Complete {
        #[arg(long)]
        n: usize,
    },
    BinaryTree {
        #[arg(long)]
        n: usize,
    },
    RandomRegular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// retry until connected
        #[arg(long)]
        connected: bool,
    },
    /// Layered lower-bound graph with doubling layer sizes
    Layered {
        #[arg(long)]
        n: usize,
    },
    /// Bipartite affine Cayley graph, two-coset generating set
    Cayley2 {
        #[arg(long)]
        p: u64,
    },
    /// Bipartite affine Cayley graph, three-coset generating set
    Cayley3 {
        #[arg(long)]
        p: u64,
    },
}

#[derive(clap::Args, Serialize)]
pub struct CoverArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Level count; omit to use round(2 sqrt(log n))
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub retries: u32,
    /// Output cover JSON
    #[arg(long)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args, Serialize)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Anchor vertex-set file; with --eps this induces the decay weights
    #[arg(long)]
    pub anchor: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Explicit weight file (lines `u v w`) instead of anchor + eps
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Hitting-time target set file (defaults to the anchor)
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Number of sampled resistance pairs
    #[arg(long, default_value_t = 8)]
    pub pairs: usize,
    /// Vertex set for the cover-time bound (max hitting x harmonic)
    #[arg(long)]
    pub matthews_set: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum StrategyKind {
    /// controller moves uniformly (simple walk)
    Uniform,
    /// weighted-walk emulator toward the anchor set
    Toward,
    /// uniform over neighbors strictly closer to the anchor
    Naive,
    /// spanning-tree tour of weighted-walk legs
    Spanning,
    /// steer toward the nearest unvisited vertex
    ClosestUncovered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum SimGoal {
    Cover,
    Hit,
}

#[derive(clap::Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum)]
    pub strategy: StrategyKind,
    /// Anchor/target set file for toward and naive strategies
    #[arg(long)]
    pub anchor: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub start: u32,
    #[arg(long, value_enum, default_value_t = SimGoal::Cover)]
    pub until: SimGoal,
    /// Hit goal target set file (defaults to the anchor)
    #[arg(long)]
    pub target: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub trials: u32,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Step cap as a multiple of n^3
    #[arg(long, default_value_t = 16.0)]
    pub cap_multiplier: f64,
    #[arg(long)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    /// Tidy per-trial CSV
    #[arg(long)]
    #[serde(skip_serializing)]
    pub csv: Option<PathBuf>,
}

#[derive(clap::Args, Serialize)]
pub struct ExploreArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub start: u32,
    /// Cover JSON for the power graph; omit to build one
    #[arg(long)]
    pub cover: Option<PathBuf>,
    /// Level count for the built cover; omit for round(2 sqrt(log n))
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, default_value_t = 50)]
    pub trials: u32,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Step cap as a multiple of the strategy's proven bound
    #[arg(long, default_value_t = 64.0)]
    pub cap_multiplier: f64,
    /// Sampled resistance pairs per region in the bound table
    #[arg(long, default_value_t = 5)]
    pub pairs: usize,
    #[arg(long)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing)]
    pub csv: Option<PathBuf>,
}

#[derive(clap::Args, Serialize)]
pub struct BenchArgs {
    /// Suite name (only `paper-bounds` exists)
    #[arg(long, default_value = "paper-bounds")]
    pub suite: String,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}
