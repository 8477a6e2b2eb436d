use crate::graph::{diameter, Distance, EdgeId, Graph, GraphError};
use crate::spanner::{Algorithm, SpannerError, SpannerResult};
use crate::target::SpannerTarget;

use super::path::{build_path_model, build_weighted_path_model};
use super::solver::MipSolver;
use super::{EnhancementSet, MipError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    pub length_limit: usize,
    pub edge_count: usize,
    /// Diameter of the returned selection; `None` when it is disconnected.
    pub diameter: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterativeOutcome {
    pub result: SpannerResult,
    pub iterations: Vec<IterationRecord>,
    pub final_length_limit: usize,
}

/// Solves path models with a growing length limit, starting from the input
/// diameter, until the optimum's diameter fits inside the limit.
///
/// A disconnected optimum jumps straight to the largest limit; if it is
/// still disconnected there, the model admits a selection the true problem
/// does not and `DisconnectedOptimum` is returned.
pub fn iterative_exact(
    g: &Graph,
    target: &SpannerTarget,
    solver: &mut dyn MipSolver,
    enh: &EnhancementSet,
) -> Result<IterativeOutcome, MipError> {
    let resolved = target.resolve_for(g)?;
    let unit = g.is_unit_weight();
    let max_l = if unit { g.node_count() - 1 } else { (g.node_count() - 1) * g.max_weight() as usize };
    let Distance::Finite(d0) = diameter(g) else {
        return Err(GraphError::Disconnected.into());
    };
    let mut l0 = d0 as usize;
    let mut iterations = Vec::new();
    let mut last: Option<Vec<EdgeId>> = None;
    let incumbent = |ids: &Option<Vec<EdgeId>>| {
        ids.as_ref().map(|ids| Box::new(SpannerResult::from_selection(g, ids.clone(), resolved, Algorithm::IterativeMip)))
    };
    loop {
        let model = if unit {
            build_path_model(g, target, l0, enh)?
        } else {
            build_weighted_path_model(g, target, l0, enh)?
        };
        let ids = match solver.solve(g, &model) {
            Ok(ids) => ids,
            Err(MipError::Solver { message, .. }) => return Err(MipError::Solver { message, incumbent: incumbent(&last) }),
            Err(MipError::Timeout { seconds, .. }) => return Err(MipError::Timeout { seconds, incumbent: incumbent(&last) }),
            Err(e) => return Err(e),
        };
        let diam = diameter(&g.spanning_subgraph(&ids)?).finite();
        iterations.push(IterationRecord { length_limit: l0, edge_count: ids.len(), diameter: diam });
        let l1 = match diam {
            Some(d) => d as usize,
            None if l0 == max_l => {
                return Err(MipError::DisconnectedOptimum { length_limit: l0, incumbent: incumbent(&last) });
            }
            None => max_l,
        };
        last = Some(ids);
        if l1 <= l0 {
            break;
        }
        l0 = l1;
    }
    let result = SpannerResult::from_selection(g, last.expect("loop ran"), resolved, Algorithm::IterativeMip);
    if !result.is_feasible() {
        return Err(SpannerError::InfeasibleResult(Box::new(result)).into());
    }
    Ok(IterativeOutcome { result, iterations, final_length_limit: l0 })
}
