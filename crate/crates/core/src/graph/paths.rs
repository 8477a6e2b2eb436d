use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::{Graph, NodeId};

/// Shortest-path length; `Infinite` marks an unreachable pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Distance {
    Finite(u64),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn plus(self, w: u64) -> Distance {
        match self {
            Distance::Finite(d) => Distance::Finite(d + w),
            Distance::Infinite => Distance::Infinite,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// Dense symmetric distance matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<Distance>,
}

impl DistanceMatrix {
    pub(crate) fn from_rows(n: usize, data: Vec<Distance>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: NodeId, b: NodeId) -> Distance {
        self.data[a * self.n + b]
    }

    pub(crate) fn set(&mut self, a: NodeId, b: NodeId, d: Distance) {
        self.data[a * self.n + b] = d;
    }

    pub fn row(&self, a: NodeId) -> &[Distance] {
        &self.data[a * self.n..(a + 1) * self.n]
    }

    /// Sum over unordered pairs, `None` if any pair is unreachable.
    pub fn unordered_sum(&self) -> Option<u64> {
        let mut total = 0u64;
        for a in 0..self.n {
            for b in a + 1..self.n {
                total += self.get(a, b).finite()?;
            }
        }
        Some(total)
    }

    /// Sum over unordered pairs of `min(d, cap)`; unreachable pairs count as `cap`.
    pub fn capped_unordered_sum(&self, cap: u64) -> u64 {
        let mut total = 0u64;
        for a in 0..self.n {
            for b in a + 1..self.n {
                total += match self.get(a, b) {
                    Distance::Finite(d) => d.min(cap),
                    Distance::Infinite => cap,
                };
            }
        }
        total
    }

    pub fn max_distance(&self) -> Distance {
        self.data.iter().copied().max().unwrap_or(Distance::Finite(0))
    }

    /// Relaxes every pair through a newly added edge `(u, v, w)`.
    pub(crate) fn add_edge_update(&mut self, u: NodeId, v: NodeId, w: u64) {
        let n = self.n;
        let row_u: Vec<Distance> = self.row(u).to_vec();
        let row_v: Vec<Distance> = self.row(v).to_vec();
        for a in 0..n {
            let (au, av) = (row_u[a], row_v[a]);
            if !au.is_finite() && !av.is_finite() {
                continue;
            }
            for b in 0..n {
                let via_uv = match row_v[b] {
                    Distance::Finite(d) => au.plus(w + d),
                    Distance::Infinite => Distance::Infinite,
                };
                let via_vu = match row_u[b] {
                    Distance::Finite(d) => av.plus(w + d),
                    Distance::Infinite => Distance::Infinite,
                };
                let cand = via_uv.min(via_vu);
                let idx = a * n + b;
                if cand < self.data[idx] {
                    self.data[idx] = cand;
                }
            }
        }
    }
}

/// Distances from `source`, restricted to edges with `mask[id] == true` when a
/// mask is given. BFS on unit-weight graphs, Dijkstra otherwise.
pub fn single_source_distances(g: &Graph, source: NodeId, mask: Option<&[bool]>) -> Vec<Distance> {
    let mut dist = vec![Distance::Infinite; g.node_count()];
    fill_single_source(g, source, mask, &mut dist);
    dist
}

pub(crate) fn fill_single_source(
    g: &Graph,
    source: NodeId,
    mask: Option<&[bool]>,
    dist: &mut [Distance],
) {
    dist.iter_mut().for_each(|d| *d = Distance::Infinite);
    let allowed = |id: usize| mask.is_none_or(|m| m[id]);
    dist[source] = Distance::Finite(0);
    if g.is_unit_weight() {
        let mut queue = VecDeque::new();
        queue.push_back((source, 0u64));
        while let Some((node, d)) = queue.pop_front() {
            for &(next, id) in g.adjacency(node) {
                if allowed(id) && dist[next] == Distance::Infinite {
                    dist[next] = Distance::Finite(d + 1);
                    queue.push_back((next, d + 1));
                }
            }
        }
    } else {
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, source)));
        while let Some(Reverse((d, node))) = heap.pop() {
            if Distance::Finite(d) > dist[node] {
                continue;
            }
            for &(next, id) in g.adjacency(node) {
                if !allowed(id) {
                    continue;
                }
                let nd = d + g.edge(id).weight;
                if Distance::Finite(nd) < dist[next] {
                    dist[next] = Distance::Finite(nd);
                    heap.push(Reverse((nd, next)));
                }
            }
        }
    }
}

pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    all_pairs_distances_masked(g, None)
}

pub fn all_pairs_distances_masked(g: &Graph, mask: Option<&[bool]>) -> DistanceMatrix {
    let n = g.node_count();
    let mut data = vec![Distance::Infinite; n * n];
    for (source, row) in data.chunks_mut(n).enumerate() {
        fill_single_source(g, source, mask, row);
    }
    DistanceMatrix::from_rows(n, data)
}
