use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "eccentric", version, about = "Eccentric p-summing constants and path pseudometrics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Exponent p >= 1.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, global = true)]
    pub tol_feas: Option<f64>,
    #[arg(long, global = true)]
    pub tol_metric: Option<f64>,
    /// Seed for randomized internals.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Log at trace level, including LP listings.
    #[arg(long, global = true)]
    pub debug: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    /// Matrices only.
    Csv,
}

/// Where the metric comes from: a space file, or the `q_1` metric of a graph.
#[derive(Debug, Args)]
pub struct MetricSource {
    /// Metric space JSON, or a CSV matrix with a header row of ids.
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// Graph JSON; its weighted shortest-path metric is used.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the (pseudo)metric axioms.
    Validate {
        #[command(flatten)]
        source: MetricSource,
        /// Check pseudometric axioms regardless of the file's flag.
        #[arg(long)]
        pseudometric: bool,
    },
    /// Eccentric pseudometric of a subset.
    EccPseudo {
        #[command(flatten)]
        source: MetricSource,
        /// Comma-separated point ids; all points when omitted.
        #[arg(long)]
        subset: Option<String>,
    },
    /// Absolute, eccentric and weak proximity of a pair sequence.
    Seqdist {
        #[command(flatten)]
        source: MetricSource,
        /// Sequence JSON.
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        subset: Option<String>,
        /// Exact sign enumeration (p = 1) or a certified bracket.
        #[arg(long, value_enum, default_value_t = WcModeArg::Auto)]
        wc: WcModeArg,
        /// Largest number of active pairs enumerated exactly.
        #[arg(long, default_value_t = 16)]
        exact_limit: usize,
        /// Random starts of the bracket's lower bound.
        #[arg(long, default_value_t = 32)]
        starts: usize,
    },
    /// Arens-Eells norm of a molecule.
    AeNorm {
        #[command(flatten)]
        source: MetricSource,
        /// Molecule JSON.
        #[arg(long)]
        molecule: PathBuf,
    },
    /// Minimal eccentric p-summing constant with its Pietsch measure.
    Pietsch {
        #[command(flatten)]
        source: MetricSource,
        /// Function JSON (`{"values": {id: real}}`).
        #[arg(long, conflicts_with = "map")]
        function: Option<PathBuf>,
        /// Map JSON; replaces the metric source.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Comma-separated ids of the set K; all points when omitted.
        #[arg(long)]
        subset: Option<String>,
        /// Exit with status 1 when the constant is infinite.
        #[arg(long)]
        require_finite: bool,
    },
    /// Eccentrically p-approximating constant of a map.
    Approx {
        #[arg(long)]
        map: PathBuf,
        /// Domain ids of K1; all when omitted.
        #[arg(long)]
        k1: Option<String>,
        /// Codomain ids of K2; all when omitted.
        #[arg(long)]
        k2: Option<String>,
    },
    /// Path metrics on a graph.
    Graph {
        #[command(subcommand)]
        which: GraphCommand,
    },
    /// Classes of vertices at zero `d_{p,mu}` distance.
    Symmetry {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        measure: Option<String>,
        /// Threshold for grouping.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Check the best-path bounds for an index.
    CheckT2 {
        #[command(flatten)]
        input: GraphInput,
        /// Index JSON.
        #[arg(long)]
        function: PathBuf,
        /// Certificate JSON; computed on K when omitted.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        subset: Option<String>,
    },
    /// Emit a fixture graph as JSON.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WcModeArg {
    /// Exact when p = 1 and the sequence is small enough, otherwise bracket.
    Auto,
    Exact,
    Bracket,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    #[arg(long)]
    pub graph: PathBuf,
    /// Metric on the vertices; the graph's `q_1` metric when omitted.
    #[arg(long)]
    pub space: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PathQueries {
    /// `from,to` vertex ids whose optimal path is reported; repeatable.
    #[arg(long = "path")]
    pub paths: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Shortest path p-distance.
    Qp {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        queries: PathQueries,
    },
    /// p-shortest path pseudodistance of a metric.
    Dp {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        queries: PathQueries,
    },
    /// Measure-weighted path pseudodistance.
    Dpmu {
        #[command(flatten)]
        input: GraphInput,
        /// `uniform`, `uniform:a,b`, `a`, `a=0.25,b=0.75`, or a JSON file `{id: weight}`.
        #[arg(long)]
        measure: Option<String>,
        #[command(flatten)]
        queries: PathQueries,
    },
    /// Best-path estimate of an index.
    Ep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        function: PathBuf,
        #[command(flatten)]
        queries: PathQueries,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Sequence,
    TwoApex,
    Circle,
    Path,
}
