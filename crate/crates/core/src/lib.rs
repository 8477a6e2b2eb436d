//! Sparse spanning subgraphs under an average-path-length budget.
//!
//! Given a connected graph and a bound on the average shortest-path length,
//! find a spanning subgraph with few edges (or little weight) that keeps the
//! average within the bound. The crate provides exact rational APL
//! arithmetic, greedy heuristics, exact enumeration and branch-and-bound,
//! integer-programming models with LP export, hardness gadgets, and
//! instance generators and loaders.

pub mod exact;
pub mod gadgets;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod mip;
pub mod rational;
pub mod spanner;
pub mod target;

pub use exact::{
    exact_feasibility, exact_solve, ExactMethod, ExactSolution, ExactSolveParams, FeasibilityWitness, Objective,
    OptimalityCertificate,
};
pub use graph::{apl, diameter, minimum_spanning_tree, truncated_apl, AplValue, Distance, Edge, EdgeId, Graph, GraphError, NodeId};
pub use greedy::{greedy_addition, greedy_addition_optimized, greedy_removal, greedy_spanner};
pub use rational::{parse_rational, Rational};
pub use spanner::{verify_feasibility, Algorithm, FeasibilityReport, SpannerError, SpannerResult};
pub use target::{ResolvedTarget, SpannerTarget, TargetError};
