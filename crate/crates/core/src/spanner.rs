//! Result and feasibility types shared by the greedy, exact and MIP solvers.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{apl_masked, contains_mst_weight_tree, is_connected_masked, AplValue, EdgeId, Graph, GraphError};
use crate::rational::Rational;
use crate::target::{ResolvedTarget, SpannerTarget, TargetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    GreedySpanner,
    GreedyRemoval,
    GreedyAddition,
    GreedyAdditionOptimized,
    ExactEnumerate,
    ExactBranchAndBound,
    IterativeMip,
}

impl Algorithm {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::GreedySpanner => "greedy-spanner",
            Self::GreedyRemoval => "removal",
            Self::GreedyAddition => "addition",
            Self::GreedyAdditionOptimized => "addition-opt",
            Self::ExactEnumerate => "exact-enumerate",
            Self::ExactBranchAndBound => "exact-bnb",
            Self::IterativeMip => "iterative-mip",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A selected spanning subgraph and what it achieves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpannerResult {
    /// Edge ids of the input graph, ascending.
    pub selected_edges: Vec<EdgeId>,
    pub achieved_apl: AplValue,
    pub target: ResolvedTarget,
    pub total_weight: u64,
    pub edge_count: usize,
    pub algorithm: Algorithm,
}

impl SpannerResult {
    pub(crate) fn from_selection(
        g: &Graph,
        mut selected: Vec<EdgeId>,
        target: ResolvedTarget,
        algorithm: Algorithm,
    ) -> Self {
        selected.sort_unstable();
        selected.dedup();
        let mask = g.mask_of(&selected).expect("selection uses ids of g");
        let achieved_apl = apl_masked(g, &mask).expect("spanner inputs have >= 2 nodes");
        Self {
            total_weight: g.weight_of(&selected),
            edge_count: selected.len(),
            selected_edges: selected,
            achieved_apl,
            target,
            algorithm,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.achieved_apl.within(&self.target.bound)
    }

    pub fn subgraph(&self, g: &Graph) -> Graph {
        g.spanning_subgraph(&self.selected_edges).expect("selection uses ids of g")
    }
}

#[derive(Debug, Error)]
pub enum SpannerError {
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("per-edge stretch must be >= 1")]
    InvalidEdgeStretch,
    #[error("result misses the APL bound: achieved {achieved:.6} > bound {bound:.6}", achieved = .0.achieved_apl.to_f64(), bound = crate::rational::to_f64(&.0.target.bound))]
    InfeasibleResult(Box<SpannerResult>),
    #[error("search incomplete ({reason}); {}", if .incumbent.is_some() { "an incumbent is available" } else { "no incumbent found" })]
    IncompleteSearch { reason: String, incumbent: Option<Box<SpannerResult>> },
    #[error("instance too large: {0}")]
    TooLarge(String),
}

/// Outcome of checking a candidate edge set against an APL target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    /// Every candidate id refers to an edge of the graph.
    pub subset_valid: bool,
    /// Every node has at least one incident candidate edge.
    pub spans_all_nodes: bool,
    pub connected: bool,
    pub achieved_apl: Option<AplValue>,
    /// `None` when the target cannot be resolved (disconnected input graph).
    pub bound: Option<Rational>,
    pub feasible: bool,
    pub contains_mst_weight_tree: bool,
    pub edge_count: usize,
    pub total_weight: u64,
}

pub fn verify_feasibility(g: &Graph, candidate: &[EdgeId], target: &SpannerTarget) -> FeasibilityReport {
    let mut ids: Vec<EdgeId> = candidate.iter().copied().filter(|&id| id < g.edge_count()).collect();
    let subset_valid = ids.len() == candidate.len();
    ids.sort_unstable();
    ids.dedup();
    let mask = g.mask_of(&ids).expect("ids filtered to range");
    let n = g.node_count();
    let mut touched = vec![false; n];
    for &id in &ids {
        touched[g.edge(id).u] = true;
        touched[g.edge(id).v] = true;
    }
    let spans_all_nodes = n == 1 || touched.iter().all(|&t| t);
    let connected = is_connected_masked(g, &mask);
    let achieved_apl = apl_masked(g, &mask).ok();
    let bound = match *target {
        SpannerTarget::Absolute(c) => Some(c),
        _ => crate::graph::apl(g)
            .ok()
            .and_then(|a| a.value())
            .and_then(|base| target.resolve(base).ok().map(|r| r.bound).or_else(|| {
                // below-base bounds still get reported
                match *target {
                    SpannerTarget::Stretch(t) => Some(t * base),
                    SpannerTarget::Increment(d) => Some(base + d),
                    SpannerTarget::Absolute(c) => Some(c),
                }
            })),
    };
    let feasible = subset_valid
        && connected
        && match (&achieved_apl, &bound) {
            (Some(a), Some(b)) => a.within(b),
            _ => false,
        };
    FeasibilityReport {
        subset_valid,
        spans_all_nodes,
        connected,
        achieved_apl,
        bound,
        feasible,
        contains_mst_weight_tree: contains_mst_weight_tree(g, &ids),
        edge_count: ids.len(),
        total_weight: g.weight_of(&ids),
    }
}
