use super::{EdgeId, Graph, GraphError};

/// Union-find with path compression and union by rank.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
        true
    }
}

/// Kruskal over the canonical edge order.
pub fn minimum_spanning_tree(g: &Graph) -> Result<Vec<EdgeId>, GraphError> {
    let mut sets = DisjointSet::new(g.node_count());
    let mut tree = Vec::with_capacity(g.node_count().saturating_sub(1));
    for (id, e) in g.edges().iter().enumerate() {
        if sets.union(e.u, e.v) {
            tree.push(id);
            if tree.len() + 1 == g.node_count() {
                break;
            }
        }
    }
    if tree.len() + 1 != g.node_count() {
        return Err(GraphError::Disconnected);
    }
    Ok(tree)
}

/// Weight of a minimum spanning forest of `(V, ids)` and its component count.
pub fn minimum_spanning_forest_weight(g: &Graph, ids: &[EdgeId]) -> (u64, usize) {
    let mut sorted = ids.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut sets = DisjointSet::new(g.node_count());
    let mut weight = 0;
    let mut components = g.node_count();
    for id in sorted {
        let e = g.edge(id);
        if sets.union(e.u, e.v) {
            weight += e.weight;
            components -= 1;
        }
    }
    (weight, components)
}

/// True when `(V, ids)` contains a spanning tree of the same weight as an MST of `g`.
pub fn contains_mst_weight_tree(g: &Graph, ids: &[EdgeId]) -> bool {
    let Ok(tree) = minimum_spanning_tree(g) else {
        return false;
    };
    let (weight, components) = minimum_spanning_forest_weight(g, ids);
    components == 1 && weight == g.weight_of(&tree)
}
