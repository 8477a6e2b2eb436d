//! Integer programming models for minimum spanners: the flow model, the
//! path model (unit and integer weights) with optional strengthening, an
//! LP-format writer/reader, assignment checking, external-solver plumbing and
//! the iterative length-limit loop.

mod cuts;
mod eval;
mod flow;
mod iterative;
mod lp;
mod model;
mod path;
mod solver;

use thiserror::Error;

use crate::graph::{EdgeId, GraphError};
use crate::spanner::{SpannerError, SpannerResult};
use crate::target::TargetError;

pub use eval::{assignment_map, evaluate_assignment, evaluate_values, lift_assignment, ConstraintCheck, EvaluationReport};
pub use flow::build_flow_model;
pub use iterative::{iterative_exact, IterationRecord, IterativeOutcome};
pub use lp::{read_lp, save_lp, write_lp};
pub use model::{
    graph_fingerprint, Constraint, Formulation, MipModel, ModelMetadata, Sense, VarKey, VarKind, Variable,
};
pub use path::{build_path_model, build_weighted_path_model, LeafReduction};
pub use solver::{parse_solution, selected_edges, InternalExactSolver, MipSolver, SolverAdapter, SOLUTION_TOLERANCE};

/// Optional strengthening of a model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnhancementSet {
    /// Drop lower-bound path constraints and make `u`, `y` continuous.
    pub relax_path_integrality: bool,
    /// Model only non-leaf nodes; leaf edges are fixed outside the model.
    pub leaf_reduction: bool,
    /// Every node keeps at least one edge.
    pub isolated_node_cuts: bool,
    /// At least `n - 1` edges.
    pub connectivity_lb_cut: bool,
    /// Edge sets whose removal disconnects the graph; keep one edge of each.
    pub edge_cut_pool: Vec<Vec<EdgeId>>,
    /// Edge sets whose removal breaks the APL bound; keep one edge of each.
    pub apl_cut_pool: Vec<Vec<EdgeId>>,
}

impl EnhancementSet {
    pub fn all_simple() -> Self {
        Self { relax_path_integrality: true, leaf_reduction: true, isolated_node_cuts: true, connectivity_lb_cut: true, ..Self::default() }
    }
}

#[derive(Debug, Error)]
pub enum MipError {
    #[error("{formulation} model needs {requirement}")]
    UnsupportedFormulation { formulation: &'static str, requirement: &'static str },
    #[error("length limit {value} outside 1..={max}")]
    LengthOutOfRange { value: usize, max: usize },
    #[error("{pool} cut #{index} rejected: {reason}")]
    InvalidCut { pool: &'static str, index: usize, reason: String },
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spanner(#[from] SpannerError),
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("assignment is missing variable {0}")]
    MissingVariable(String),
    #[error("variable {name} = {value} is not binary within tolerance")]
    NonBinary { name: String, value: f64 },
    #[error("solver failed: {message}")]
    Solver { message: String, incumbent: Option<Box<SpannerResult>> },
    #[error("solver exceeded its {seconds:.1}s time limit")]
    Timeout { seconds: f64, incumbent: Option<Box<SpannerResult>> },
    #[error("model optimum at L = {length_limit} is disconnected; the base model does not force connectivity at this bound")]
    DisconnectedOptimum { length_limit: usize, incumbent: Option<Box<SpannerResult>> },
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}
