use super::{DisjointSet, EdgeId, Graph};

pub fn is_connected(g: &Graph) -> bool {
    component_count(g, None) == 1
}

pub fn is_connected_masked(g: &Graph, mask: &[bool]) -> bool {
    component_count(g, Some(mask)) == 1
}

pub fn component_count(g: &Graph, mask: Option<&[bool]>) -> usize {
    let mut sets = DisjointSet::new(g.node_count());
    let mut components = g.node_count();
    for (id, e) in g.edges().iter().enumerate() {
        if mask.is_none_or(|m| m[id]) && sets.union(e.u, e.v) {
            components -= 1;
        }
    }
    components
}

/// Edges whose removal disconnects their component, in canonical id order.
pub fn bridges(g: &Graph) -> Vec<EdgeId> {
    let n = g.node_count();
    let mut order = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut found = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if order[root] != usize::MAX {
            continue;
        }
        // (node, parent edge, next adjacency index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        order[root] = counter;
        low[root] = counter;
        counter += 1;
        while let Some(top) = stack.last_mut() {
            let (node, parent_edge, next) = *top;
            if let Some(&(child, id)) = g.adjacency(node).get(next) {
                top.2 += 1;
                if id == parent_edge {
                    continue;
                }
                if order[child] == usize::MAX {
                    order[child] = counter;
                    low[child] = counter;
                    counter += 1;
                    stack.push((child, id, 0));
                } else {
                    low[node] = low[node].min(order[child]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[node]);
                    if low[node] > order[parent] {
                        found.push(parent_edge);
                    }
                }
            }
        }
    }
    found.sort_unstable();
    found
}
