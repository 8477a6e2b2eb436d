use super::{DisjointSet, EdgeId, Graph};

/// Every spanning tree of `g`, each as sorted edge ids, or `None` if there are
/// more than `limit` of them. Intended for small test instances.
pub fn spanning_trees(g: &Graph, limit: usize) -> Option<Vec<Vec<EdgeId>>> {
    let n = g.node_count();
    let mut out = Vec::new();
    if n == 1 {
        out.push(Vec::new());
        return Some(out);
    }
    let mut chosen = Vec::with_capacity(n - 1);
    let ok = extend(g, 0, &mut chosen, &mut out, limit);
    ok.then_some(out)
}

fn extend(
    g: &Graph,
    next: EdgeId,
    chosen: &mut Vec<EdgeId>,
    out: &mut Vec<Vec<EdgeId>>,
    limit: usize,
) -> bool {
    let n = g.node_count();
    if chosen.len() + 1 == n {
        if out.len() == limit {
            return false;
        }
        out.push(chosen.clone());
        return true;
    }
    if next == g.edge_count() || !completable(g, next, chosen) {
        return true;
    }
    let e = g.edge(next);
    let mut sets = DisjointSet::new(n);
    for &id in chosen.iter() {
        sets.union(g.edge(id).u, g.edge(id).v);
    }
    if sets.find(e.u) != sets.find(e.v) {
        chosen.push(next);
        let ok = extend(g, next + 1, chosen, out, limit);
        chosen.pop();
        if !ok {
            return false;
        }
    }
    extend(g, next + 1, chosen, out, limit)
}

/// Chosen edges plus every edge from `next` on still connect the graph.
fn completable(g: &Graph, next: EdgeId, chosen: &[EdgeId]) -> bool {
    let mut sets = DisjointSet::new(g.node_count());
    let mut components = g.node_count();
    for id in chosen.iter().copied().chain(next..g.edge_count()) {
        let e = g.edge(id);
        if sets.union(e.u, e.v) {
            components -= 1;
        }
    }
    components == 1
}
