//! Greedy sparsifiers: the classic stretch spanner and three APL-driven scans.

use num_traits::One;

use crate::graph::{all_pairs_distances_masked, single_source_distances, AplValue, Distance, DistanceMatrix, EdgeId, Graph};
use crate::rational::Rational;
use crate::spanner::{Algorithm, SpannerError, SpannerResult};
use crate::target::{ResolvedTarget, SpannerTarget};

/// `d > t * w`, with an unreachable pair always exceeding.
fn exceeds(d: Distance, t: &Rational, w: u64) -> bool {
    match d {
        Distance::Infinite => true,
        Distance::Finite(d) => Rational::from_integer(d as i128) > *t * Rational::from_integer(w as i128),
    }
}

fn empty_matrix(n: usize) -> DistanceMatrix {
    let mut data = vec![Distance::Infinite; n * n];
    for a in 0..n {
        data[a * n + a] = Distance::Finite(0);
    }
    DistanceMatrix::from_rows(n, data)
}

/// Lightest-first: keep an edge when the current spanner's path between its
/// endpoints is longer than `t` times its weight.
pub fn greedy_spanner(g: &Graph, t: Rational) -> Result<SpannerResult, SpannerError> {
    let target = SpannerTarget::stretch(t)?.resolve_for(g)?;
    let mut dist = empty_matrix(g.node_count());
    let mut selected = Vec::new();
    for (id, e) in g.edges().iter().enumerate() {
        if exceeds(dist.get(e.u, e.v), &t, e.weight) {
            dist.add_edge_update(e.u, e.v, e.weight);
            selected.push(id);
        }
    }
    Ok(SpannerResult::from_selection(g, selected, target, Algorithm::GreedySpanner))
}

/// Heaviest-first: drop an edge whenever the graph stays connected and within
/// the APL bound without it.
pub fn greedy_removal(g: &Graph, target: &SpannerTarget) -> Result<SpannerResult, SpannerError> {
    let resolved = target.resolve_for(g)?;
    let n = g.node_count();
    let limit = resolved.distance_sum_limit(n);
    let mut mask = vec![true; g.edge_count()];
    let mut dist = all_pairs_distances_masked(g, None);
    let mut ordered_sum: u64 = (0..n).map(|a| row_sum(dist.row(a))).sum();

    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.sort_by_key(|&id| (std::cmp::Reverse(g.edge(id).weight), id));

    for id in order {
        let e = *g.edge(id);
        // Only sources with a shortest path through the edge can change.
        let affected: Vec<usize> = (0..n)
            .filter(|&a| {
                let (du, dv) = (dist.get(a, e.u), dist.get(a, e.v));
                du.plus(e.weight) == dv || dv.plus(e.weight) == du
            })
            .collect();
        mask[id] = false;
        let mut rows = Vec::with_capacity(affected.len());
        let mut connected = true;
        let mut new_sum = ordered_sum;
        for &a in &affected {
            let row = single_source_distances(g, a, Some(&mask));
            if row.iter().any(|d| !d.is_finite()) {
                connected = false;
                break;
            }
            new_sum = new_sum - row_sum(dist.row(a)) + row_sum(&row);
            rows.push((a, row));
        }
        // Each changed pair (a, b) has both endpoints affected, so the ordered
        // sum counts both directions through the replaced rows.
        if connected && Rational::from_integer((new_sum / 2) as i128) <= limit {
            for (a, row) in rows {
                for (b, &d) in row.iter().enumerate() {
                    dist.set(a, b, d);
                    dist.set(b, a, d);
                }
            }
            ordered_sum = new_sum;
        } else {
            mask[id] = true;
        }
    }
    let selected = (0..g.edge_count()).filter(|&id| mask[id]).collect();
    Ok(SpannerResult::from_selection(g, selected, resolved, Algorithm::GreedyRemoval))
}

fn row_sum(row: &[Distance]) -> u64 {
    row.iter().map(|d| d.finite().unwrap_or(0)).sum()
}

/// Lightest-first: add edges while the partial graph misses the bound.
pub fn greedy_addition(g: &Graph, target: &SpannerTarget) -> Result<SpannerResult, SpannerError> {
    let resolved = target.resolve_for(g)?;
    let selected = addition_scan(g, &resolved, None);
    let result = SpannerResult::from_selection(g, selected, resolved, Algorithm::GreedyAddition);
    debug_assert!(result.is_feasible());
    Ok(result)
}

/// [`greedy_addition`] with a per-edge filter: an edge is only added when the
/// current path between its endpoints exceeds `t_edge` times its weight.
/// `t_edge` defaults to `bound / apl(g)`. When the filter blocks the edges
/// needed to reach the bound, the unfinished result comes back as
/// [`SpannerError::InfeasibleResult`].
pub fn greedy_addition_optimized(
    g: &Graph,
    target: &SpannerTarget,
    t_edge: Option<Rational>,
) -> Result<SpannerResult, SpannerError> {
    let resolved = target.resolve_for(g)?;
    let t_edge = t_edge.unwrap_or_else(|| resolved.stretch());
    if t_edge < Rational::one() {
        return Err(SpannerError::InvalidEdgeStretch);
    }
    let selected = addition_scan(g, &resolved, Some(t_edge));
    let result = SpannerResult::from_selection(g, selected, resolved, Algorithm::GreedyAdditionOptimized);
    if result.is_feasible() {
        Ok(result)
    } else {
        Err(SpannerError::InfeasibleResult(Box::new(result)))
    }
}

fn addition_scan(g: &Graph, resolved: &ResolvedTarget, t_edge: Option<Rational>) -> Vec<EdgeId> {
    let mut dist = empty_matrix(g.node_count());
    let mut selected = Vec::new();
    for (id, e) in g.edges().iter().enumerate() {
        if AplValue::from_matrix(&dist).within(&resolved.bound) {
            break;
        }
        if t_edge.is_none_or(|t| exceeds(dist.get(e.u, e.v), &t, e.weight)) {
            dist.add_edge_update(e.u, e.v, e.weight);
            selected.push(id);
        }
    }
    selected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apl_masked, contains_mst_weight_tree};
    use crate::target::TargetError;

    fn abs(p: i128, q: i128) -> SpannerTarget {
        SpannerTarget::absolute(Rational::new(p, q)).unwrap()
    }

    #[test]
    fn spanner_on_triangle() {
        let k3 = Graph::complete(3);
        assert_eq!(greedy_spanner(&k3, Rational::from_integer(3)).unwrap().edge_count, 2);
        assert_eq!(greedy_spanner(&k3, Rational::new(3, 2)).unwrap().edge_count, 3);
    }

    #[test]
    fn spanner_rejects_disconnected_input() {
        let g = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            greedy_spanner(&g, Rational::from_integer(2)),
            Err(SpannerError::Target(TargetError::DisconnectedInput))
        ));
    }

    #[test]
    fn removal_on_triangle() {
        let k3 = Graph::complete(3);
        assert_eq!(greedy_removal(&k3, &abs(4, 3)).unwrap().edge_count, 2);
        assert_eq!(greedy_removal(&k3, &abs(1, 1)).unwrap().edge_count, 3);
        assert!(matches!(
            greedy_removal(&k3, &abs(1, 2)),
            Err(SpannerError::Target(TargetError::Infeasible { .. }))
        ));
    }

    #[test]
    fn addition_on_triangle() {
        let k3 = Graph::complete(3);
        assert_eq!(greedy_addition(&k3, &abs(4, 3)).unwrap().edge_count, 2);
        assert_eq!(greedy_addition(&k3, &abs(1, 1)).unwrap().edge_count, 3);
    }

    #[test]
    fn optimized_addition_filter_interaction() {
        let k3 = Graph::complete(3);
        match greedy_addition_optimized(&k3, &abs(1, 1), Some(Rational::from_integer(3))) {
            Err(SpannerError::InfeasibleResult(r)) => assert_eq!(r.edge_count, 2),
            other => panic!("expected an infeasible result, got {other:?}"),
        }
        let r = greedy_addition_optimized(&k3, &abs(4, 3), Some(Rational::new(3, 2))).unwrap();
        assert_eq!(r.edge_count, 2);
        assert!(matches!(
            greedy_addition_optimized(&k3, &abs(4, 3), Some(Rational::new(1, 2))),
            Err(SpannerError::InvalidEdgeStretch)
        ));
    }

    #[test]
    fn optimized_addition_keeps_trees_whole() {
        let g = Graph::new(5, [(0, 1, 3), (1, 2, 1), (1, 3, 2), (3, 4, 5)]).unwrap();
        let r = greedy_addition_optimized(&g, &abs(100, 1), None).unwrap();
        assert_eq!(r.edge_count, 4);
    }

    #[test]
    fn removal_matches_recomputed_apl() {
        let g = Graph::new(
            6,
            [(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 4, 3), (4, 5, 1), (5, 0, 2), (0, 3, 4), (1, 4, 2), (2, 5, 5)],
        )
        .unwrap();
        let r = greedy_removal(&g, &SpannerTarget::increment(Rational::new(1, 2)).unwrap()).unwrap();
        let mask = g.mask_of(&r.selected_edges).unwrap();
        assert_eq!(r.achieved_apl, apl_masked(&g, &mask).unwrap());
        assert!(r.is_feasible());
    }

    #[test]
    fn removal_can_miss_the_mst_on_weighted_input() {
        // x=0, y=1, z=2, w=3; heavy x-y shortcut plus a lighter x-z-w-y detour,
        // and four leaves hung on each of x and y so the shortcut is worth keeping.
        let mut edges = vec![(0, 1, 3), (0, 2, 2), (2, 3, 2), (3, 1, 2)];
        for i in 0..4 {
            edges.push((0, 4 + i, 1));
            edges.push((1, 8 + i, 1));
        }
        let g = Graph::new(12, edges).unwrap();
        // apl without x-y is 50/11 > 4, without x-z it is 85/22 <= 4
        let r = greedy_removal(&g, &abs(4, 1)).unwrap();
        assert!(r.is_feasible());
        assert!(r.selected_edges.contains(&g.find_edge(0, 1).unwrap()));
        assert!(!contains_mst_weight_tree(&g, &r.selected_edges));
    }
}
