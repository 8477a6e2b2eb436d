//! Undirected graphs with positive integer weights and the shortest-path,
//! APL, MST and connectivity primitives the rest of the crate builds on.
//!
//! Edge ids follow the canonical order `(weight, min endpoint, max endpoint)`,
//! so iterating `0..edge_count()` is the deterministic tie-broken order used
//! by every greedy scan and every exact enumeration.

mod connectivity;
mod metrics;
mod mst;
mod paths;
mod trees;

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

pub use connectivity::{bridges, component_count, is_connected, is_connected_masked};
pub use metrics::{apl, apl_masked, diameter, pairwise_distance_sum, truncated_apl, AplValue};
pub use mst::{contains_mst_weight_tree, minimum_spanning_forest_weight, minimum_spanning_tree, DisjointSet};
pub use paths::{
    all_pairs_distances, all_pairs_distances_masked, single_source_distances, Distance,
    DistanceMatrix,
};
pub use trees::spanning_trees;

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("edge ({u}, {v}) references a node outside 0..{node_count}")]
    InvalidNode { u: NodeId, v: NodeId, node_count: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge ({0}, {1}) has weight 0; weights must be >= 1")]
    ZeroWeight(NodeId, NodeId),
    #[error("operation needs at least 2 nodes, graph has {0}")]
    TooFewNodes(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge id {0} out of range")]
    InvalidEdgeId(EdgeId),
    #[error("truncation length must be >= 1")]
    InvalidTruncation,
}

/// Undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: u64,
}

impl Edge {
    pub fn canonical_key(&self) -> (u64, NodeId, NodeId) {
        (self.weight, self.u, self.v)
    }

    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Immutable weighted undirected graph on nodes `0..node_count`.
#[derive(Debug, Clone)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
    lookup: HashMap<(NodeId, NodeId), EdgeId>,
    unit_weights: bool,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId, u64)>,
    {
        if node_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut list = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (a, b, weight) in edges {
            if a >= node_count || b >= node_count {
                return Err(GraphError::InvalidNode { u: a, v: b, node_count });
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if weight == 0 {
                return Err(GraphError::ZeroWeight(a, b));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            list.push(Edge { u, v, weight });
        }
        list.sort_by_key(Edge::canonical_key);
        Ok(Self::from_sorted(node_count, list))
    }

    /// Unit-weight graph from node pairs.
    pub fn unweighted<I>(node_count: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::new(node_count, pairs.into_iter().map(|(u, v)| (u, v, 1)))
    }

    pub fn complete(node_count: usize) -> Self {
        let pairs = (0..node_count).flat_map(|u| (u + 1..node_count).map(move |v| (u, v, 1)));
        Self::new(node_count, pairs).expect("complete graph is valid")
    }

    pub fn path(node_count: usize) -> Self {
        let pairs = (1..node_count).map(|v| (v - 1, v, 1));
        Self::new(node_count, pairs).expect("path graph is valid")
    }

    fn from_sorted(node_count: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        let mut lookup = HashMap::with_capacity(edges.len());
        for (id, e) in edges.iter().enumerate() {
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
            lookup.insert((e.u, e.v), id);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let unit_weights = edges.iter().all(|e| e.weight == 1);
        Self { node_count, edges, adjacency, lookup, unit_weights }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// Neighbors of `node` with the connecting edge id, sorted by neighbor.
    pub fn adjacency(&self, node: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn neighbors(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency[node].iter().map(|&(n, _)| n)
    }

    pub fn find_edge(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.lookup.get(&key).copied()
    }

    pub fn weight_between(&self, a: NodeId, b: NodeId) -> Option<u64> {
        self.find_edge(a, b).map(|id| self.edges[id].weight)
    }

    pub fn is_unit_weight(&self) -> bool {
        self.unit_weights
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).max().unwrap_or(0)
    }

    pub fn weight_of(&self, ids: &[EdgeId]) -> u64 {
        ids.iter().map(|&id| self.edges[id].weight).sum()
    }

    /// Edge mask with `true` at every id in `ids`.
    pub fn mask_of(&self, ids: &[EdgeId]) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.edges.len()];
        for &id in ids {
            *mask.get_mut(id).ok_or(GraphError::InvalidEdgeId(id))? = true;
        }
        Ok(mask)
    }

    /// Spanning subgraph `(V, ids)`; edge ids are reassigned in canonical order.
    pub fn spanning_subgraph(&self, ids: &[EdgeId]) -> Result<Graph, GraphError> {
        let mask = self.mask_of(ids)?;
        let edges = self
            .edges
            .iter()
            .zip(&mask)
            .filter(|(_, &keep)| keep)
            .map(|(e, _)| *e)
            .collect();
        Ok(Self::from_sorted(self.node_count, edges))
    }

    /// Maps the edges of a spanning subgraph back to ids of `self`.
    pub fn edge_ids_of(&self, sub: &Graph) -> Option<Vec<EdgeId>> {
        sub.edges
            .iter()
            .map(|e| self.find_edge(e.u, e.v).filter(|&id| self.edges[id].weight == e.weight))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rejects_invalid_input() {
        assert_eq!(Graph::new(0, []), Err(GraphError::Empty));
        assert_eq!(Graph::unweighted(2, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(Graph::unweighted(3, [(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(Graph::new(2, [(0, 1, 0)]), Err(GraphError::ZeroWeight(0, 1)));
        assert!(matches!(Graph::unweighted(2, [(0, 2)]), Err(GraphError::InvalidNode { .. })));
    }

    #[test]
    fn edges_follow_canonical_order() {
        let g = Graph::new(4, [(3, 2, 1), (0, 1, 5), (1, 2, 1), (0, 3, 2)]).unwrap();
        let keys: Vec<_> = g.edges().iter().map(Edge::canonical_key).collect();
        assert_eq!(keys, vec![(1, 1, 2), (1, 2, 3), (2, 0, 3), (5, 0, 1)]);
        assert_eq!(g.find_edge(1, 0), Some(3));
        assert_eq!(g.degree(2), 2);
        assert!(!g.is_unit_weight());
    }

    #[test]
    fn spanning_subgraph_keeps_nodes() {
        let g = Graph::complete(4);
        let sub = g.spanning_subgraph(&[0, 5]).unwrap();
        assert_eq!(sub.node_count(), 4);
        assert_eq!(sub.edge_count(), 2);
        assert_eq!(g.edge_ids_of(&sub).unwrap(), vec![0, 5]);
        assert!(g.spanning_subgraph(&[6]).is_err());
    }
}
