//! Reduction gadgets: a weighted subset-sum construction and an
//! exact-3-cover construction for tree spanners.

mod ecsts;
mod subset_sum;

use thiserror::Error;

use crate::graph::GraphError;

pub use ecsts::{build_ecsts_gadget, find_exact_cover, CoverProfile, EcstsGadget};
pub use subset_sum::{build_subset_sum_gadget, decode_subset_sum, SubsetSumGadget};

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("gadget needs at least one value")]
    EmptyValues,
    #[error("values must be positive")]
    ZeroValue,
    #[error("target must be positive")]
    ZeroTarget,
    #[error("target {target} exceeds the spoke distance sum {spoke_sum}")]
    BudgetUnderflow { target: u64, spoke_sum: u64 },
    #[error("subset {index} must hold three distinct elements in range")]
    MalformedSubset { index: usize },
    #[error("no exact cover exists; pass explicit (r, C)")]
    NoExactCover,
    #[error("gadget invariant violated: {0}")]
    InvariantViolated(String),
    #[error("candidate is not a spanning tree")]
    NotSpanningTree,
    #[error("witness rejected: {0}")]
    WitnessInfeasible(String),
    #[error("fully attached subsets do not form an exact cover")]
    NotACover,
    #[error(transparent)]
    Graph(#[from] GraphError),
}
