//! `mecs`: batch front end for sparse APL-bounded spanners.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mecs_core::{parse_rational, Rational, SpannerTarget};

use crate::report::Report;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INFEASIBLE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_TARGET: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;
pub const EXIT_SOLVER: u8 = 5;

#[derive(Parser)]
#[command(name = "mecs", version, about = "Minimum spanning subgraphs under an average path length budget")]
struct Cli {
    /// Emit the report as a single JSON object.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size, average path length and diameter of a graph.
    Apl {
        /// Edge-list file, or `builtin:NAME`.
        graph: String,
    },
    /// Run a greedy heuristic.
    Sparsify {
        #[arg(long, value_enum)]
        algo: Algo,
        #[command(flatten)]
        target: TargetArgs,
        /// Per-edge stretch for `addition-opt` (defaults to the target's ratio).
        #[arg(long, value_parser = rational_arg)]
        edge_stretch: Option<Rational>,
        #[command(flatten)]
        output: OutputArgs,
        graph: String,
    },
    /// Minimum spanner by enumeration or branch-and-bound.
    Exact {
        #[arg(long, value_enum, default_value = "bnb")]
        method: Method,
        #[command(flatten)]
        target: TargetArgs,
        /// Only consider subgraphs with at most n - 1 + E edges.
        #[arg(long)]
        max_extra: Option<usize>,
        /// Minimize total weight instead of edge count.
        #[arg(long)]
        by_weight: bool,
        /// Search node cap; reaching it exits with the resource code.
        #[arg(long, default_value_t = 200_000)]
        node_limit: u64,
        /// Seconds before the search gives up.
        #[arg(long)]
        time_limit: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
        graph: String,
    },
    /// Write an integer program in LP format plus a `.meta` sidecar.
    ExportMip {
        #[arg(long, value_enum)]
        formulation: FormulationArg,
        /// Path length limit: a number or `auto` for the diameter.
        #[arg(long = "L", default_value = "auto")]
        length_limit: String,
        #[command(flatten)]
        enhancements: EnhancementArgs,
        #[arg(long)]
        leaf_reduction: bool,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        graph: String,
    },
    /// Iterate path models with a growing length limit until the limit holds.
    SolveMip {
        /// Shell template with `{model}` and `{solution}`, or `internal:exact`.
        #[arg(long)]
        solver_cmd: String,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        enhancements: EnhancementArgs,
        /// Seconds allowed per solver call.
        #[arg(long)]
        timeout: Option<f64>,
        /// Search node cap for `internal:exact`.
        #[arg(long, default_value_t = 200_000)]
        node_limit: u64,
        #[command(flatten)]
        output: OutputArgs,
        graph: String,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Check a spanner edge list against its original graph.
    Verify {
        #[arg(long)]
        against: String,
        #[command(flatten)]
        target: TargetArgs,
        spanner: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum GenKind {
    /// Random points in a square, joined when close enough.
    UnitDisk {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long = "box", default_value_t = 100.0)]
        box_size: f64,
        /// Connection radius (defaults to 20, or the far threshold when weighted).
        #[arg(long)]
        range: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Weight 1 up to `--near`, weight 2 up to `--far`.
        #[arg(long)]
        weighted: bool,
        #[arg(long, default_value_t = 12.5)]
        near: f64,
        #[arg(long, default_value_t = 25.0)]
        far: f64,
        #[arg(long, default_value_t = 1000)]
        max_attempts: usize,
        /// Also write the point coordinates here.
        #[arg(long)]
        coords: Option<PathBuf>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Connected random graph: a random tree plus extra edges.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        max_weight: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Weighted gadget encoding a subset-sum instance.
    GadgetSubsetSum {
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<u64>,
        #[arg(long)]
        target: u64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Unweighted gadget encoding an exact 3-cover instance.
    GadgetEcsts {
        #[arg(long)]
        t: usize,
        /// A triple of 1-based elements; repeat the flag or separate triples with `;`.
        #[arg(long, required = true)]
        subsets: Vec<String>,
        /// Explicit pad count, needed when no exact cover exists.
        #[arg(long, requires = "distance_budget")]
        r: Option<u64>,
        /// Explicit distance budget.
        #[arg(long = "C", requires = "r")]
        distance_budget: Option<u64>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct TargetArgs {
    /// Additive slack over the input's APL (`p/q` or decimal).
    #[arg(long, value_parser = rational_arg)]
    increment: Option<Rational>,
    /// Multiplicative slack over the input's APL.
    #[arg(long, value_parser = rational_arg)]
    stretch: Option<Rational>,
    /// Absolute APL bound.
    #[arg(long = "target-apl", value_parser = rational_arg)]
    target_apl: Option<Rational>,
}

impl TargetArgs {
    pub fn target(&self) -> Result<SpannerTarget, mecs_core::TargetError> {
        match (self.increment, self.stretch, self.target_apl) {
            (Some(d), _, _) => SpannerTarget::increment(d),
            (_, Some(t), _) => SpannerTarget::stretch(t),
            (_, _, Some(c)) => SpannerTarget::absolute(c),
            _ => unreachable!("clap enforces exactly one target option"),
        }
    }
}

#[derive(Args, Clone)]
pub struct OutputArgs {
    /// Write the selected edges as an edge list.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the selected edges as a Graphviz graph.
    #[arg(long)]
    out_dot: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct EnhancementArgs {
    /// Continuous path variables without lower-bound rows.
    #[arg(long)]
    relax_paths: bool,
    /// Every node keeps an edge.
    #[arg(long)]
    iso_cuts: bool,
    /// At least n - 1 edges.
    #[arg(long)]
    conn_cut: bool,
}

#[derive(ValueEnum, Clone, Copy)]
pub enum Algo {
    GreedySpanner,
    Removal,
    Addition,
    AdditionOpt,
}

#[derive(ValueEnum, Clone, Copy)]
pub enum Method {
    Enumerate,
    Bnb,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub enum FormulationArg {
    Flow,
    Path,
    PathWeighted,
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// A failed command: exit code, message and whatever report was built.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub report: Option<Report>,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), report: None }
    }

    pub fn with_report(mut self, report: Report) -> Self {
        self.report = Some(report);
        self
    }
}

/// What a finished command prints.
pub enum Output {
    Report(Report, u8),
    Text(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let result = match cli.command {
        Command::Apl { graph } => commands::apl(&graph),
        Command::Sparsify { algo, target, edge_stretch, output, graph } => {
            commands::sparsify(&graph, algo, &target, edge_stretch, &output)
        }
        Command::Exact { method, target, max_extra, by_weight, node_limit, time_limit, output, graph } => {
            commands::exact(&graph, method, &target, max_extra, by_weight, node_limit, time_limit, &output)
        }
        Command::ExportMip { formulation, length_limit, enhancements, leaf_reduction, target, out, graph } => {
            commands::export_mip(&graph, formulation, &length_limit, &enhancements, leaf_reduction, &target, &out)
        }
        Command::SolveMip { solver_cmd, target, enhancements, timeout, node_limit, output, graph } => {
            commands::solve_mip(&graph, &solver_cmd, &target, &enhancements, timeout, node_limit, &output)
        }
        Command::Gen { kind } => commands::generate(kind),
        Command::Verify { against, target, spanner } => commands::verify(&against, &target, &spanner),
    };
    match result {
        Ok(Output::Report(report, code)) => {
            print!("{}", report.render(json));
            ExitCode::from(code)
        }
        Ok(Output::Text(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Some(report) = &failure.report {
                print!("{}", report.render(json));
            }
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
