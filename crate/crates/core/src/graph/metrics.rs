use serde::Serialize;

use super::paths::{all_pairs_distances, all_pairs_distances_masked, single_source_distances};
use super::{Distance, DistanceMatrix, Graph, GraphError, NodeId};
use crate::rational::{self, Rational};

/// Average path length kept as an exact fraction `distance_sum / pair_count`.
///
/// `distance_sum` runs over unordered pairs, so the value equals the
/// ordered-pair average `2 * sum / (n (n - 1))`. When the graph is
/// disconnected `is_finite` is false and `distance_sum` only covers the
/// reachable pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AplValue {
    pub distance_sum: u64,
    pub pair_count: u64,
    pub is_finite: bool,
}

impl AplValue {
    pub fn from_matrix(dist: &DistanceMatrix) -> Self {
        let n = dist.node_count() as u64;
        let pair_count = n * n.saturating_sub(1) / 2;
        let mut distance_sum = 0;
        let mut is_finite = true;
        for a in 0..dist.node_count() {
            for &d in &dist.row(a)[a + 1..] {
                match d {
                    Distance::Finite(d) => distance_sum += d,
                    Distance::Infinite => is_finite = false,
                }
            }
        }
        Self { distance_sum, pair_count, is_finite }
    }

    /// Exact APL, or `None` when disconnected.
    pub fn value(&self) -> Option<Rational> {
        (self.is_finite && self.pair_count > 0)
            .then(|| Rational::new(self.distance_sum as i128, self.pair_count as i128))
    }

    /// Sum over ordered pairs, the numerator of the `n (n - 1)` form.
    pub fn ordered_sum(&self) -> Option<u64> {
        self.is_finite.then_some(2 * self.distance_sum)
    }

    /// `apl <= bound`, compared exactly; a disconnected graph never satisfies it.
    pub fn within(&self, bound: &Rational) -> bool {
        self.value().is_some_and(|v| v <= *bound)
    }

    pub fn to_f64(&self) -> f64 {
        self.value().map_or(f64::INFINITY, |v| rational::to_f64(&v))
    }
}

pub fn apl(g: &Graph) -> Result<AplValue, GraphError> {
    if g.node_count() < 2 {
        return Err(GraphError::TooFewNodes(g.node_count()));
    }
    Ok(AplValue::from_matrix(&all_pairs_distances(g)))
}

/// APL of the spanning subgraph selected by `mask`.
pub fn apl_masked(g: &Graph, mask: &[bool]) -> Result<AplValue, GraphError> {
    if g.node_count() < 2 {
        return Err(GraphError::TooFewNodes(g.node_count()));
    }
    Ok(AplValue::from_matrix(&all_pairs_distances_masked(g, Some(mask))))
}

/// Sum of `d(u, v)` over unordered pairs `{u, v}` with `u` in `a`, `v` in `b`,
/// `u != v`, each pair counted once.
pub fn pairwise_distance_sum(g: &Graph, a: &[NodeId], b: &[NodeId]) -> Result<Distance, GraphError> {
    let n = g.node_count();
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    for &x in a {
        *in_a.get_mut(x).ok_or(GraphError::InvalidNode { u: x, v: x, node_count: n })? = true;
    }
    for &x in b {
        *in_b.get_mut(x).ok_or(GraphError::InvalidNode { u: x, v: x, node_count: n })? = true;
    }
    let mut total = 0u64;
    for x in 0..n {
        if !in_a[x] && !in_b[x] {
            continue;
        }
        let dist = single_source_distances(g, x, None);
        for y in x + 1..n {
            if (in_a[x] && in_b[y]) || (in_a[y] && in_b[x]) {
                match dist[y] {
                    Distance::Finite(d) => total += d,
                    Distance::Infinite => return Ok(Distance::Infinite),
                }
            }
        }
    }
    Ok(Distance::Finite(total))
}

/// `(1 / (n (n - 1))) * sum over ordered pairs of min(d, limit)`; unreachable
/// pairs count as `limit`.
pub fn truncated_apl(g: &Graph, limit: u64) -> Result<Rational, GraphError> {
    if limit < 1 {
        return Err(GraphError::InvalidTruncation);
    }
    let n = g.node_count();
    if n < 2 {
        return Err(GraphError::TooFewNodes(n));
    }
    let capped = all_pairs_distances(g).capped_unordered_sum(limit);
    Ok(Rational::new(2 * capped as i128, (n * (n - 1)) as i128))
}

pub fn diameter(g: &Graph) -> Distance {
    all_pairs_distances(g).max_distance()
}
