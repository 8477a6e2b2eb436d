use crate::graph::{all_pairs_distances, is_connected_masked, EdgeId, Graph, NodeId};

use super::GadgetError;

/// Unit-weight tree-spanner gadget from an exact-3-cover instance.
///
/// Ground elements are `0..3t` and subsets are 0-based triples. Node layout:
/// pad hub `P_0 = 0`, pads `P_1..P_r = 1..=r`, then one node per subset, then
/// one node per element.
#[derive(Debug, Clone)]
pub struct EcstsGadget {
    pub t: usize,
    pub subsets: Vec<[usize; 3]>,
    /// Number of pads `r`, excluding `P_0`.
    pub pad_count: u64,
    pub distance_budget: u64,
    pub graph: Graph,
    /// Spanning tree realizing `cover`, when a cover was found.
    pub canonical_tree: Option<Vec<EdgeId>>,
    pub cover: Option<Vec<usize>>,
}

/// How a spanning tree attaches element nodes to subset nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverProfile {
    /// `counts[j]`: subset nodes adjacent to exactly `j` element nodes.
    pub counts: [usize; 4],
    /// Distance sum over element pairs in the tree.
    pub sigma_tt: u64,
    /// `18t^2 - 12t + 6(t - n_3) - 2 n_2`
    pub predicted_sigma_tt: i64,
}

impl CoverProfile {
    pub fn residual(&self) -> i64 {
        self.sigma_tt as i64 - self.predicted_sigma_tt
    }

    /// `n_1 + 2 n_2 + 3 n_3`
    pub fn attached_elements(&self) -> usize {
        self.counts[1] + 2 * self.counts[2] + 3 * self.counts[3]
    }
}

impl EcstsGadget {
    pub fn k(&self) -> usize {
        self.subsets.len()
    }

    pub fn pad_node(&self, i: usize) -> NodeId {
        i
    }

    pub fn subset_node(&self, i: usize) -> NodeId {
        self.pad_count as usize + 1 + i
    }

    pub fn element_node(&self, j: usize) -> NodeId {
        self.pad_count as usize + 1 + self.k() + j
    }

    fn is_subset_node(&self, v: NodeId) -> bool {
        (self.subset_node(0)..self.subset_node(self.k())).contains(&v)
    }

    fn is_element_node(&self, v: NodeId) -> bool {
        v >= self.element_node(0)
    }

    pub fn cover_profile(&self, candidate: &[EdgeId]) -> Result<CoverProfile, GadgetError> {
        let tree = self.spanning_tree(candidate)?;
        let mut counts = [0usize; 4];
        for i in 0..self.k() {
            let m = self.subset_node(i);
            let attached = tree.neighbors(m).filter(|&v| self.is_element_node(v)).count();
            counts[attached.min(3)] += 1;
        }
        let dist = all_pairs_distances(&tree);
        let elements: Vec<NodeId> = (0..3 * self.t).map(|j| self.element_node(j)).collect();
        let mut sigma_tt = 0;
        for (a, &x) in elements.iter().enumerate() {
            for &y in &elements[a + 1..] {
                sigma_tt += dist.get(x, y).finite().expect("tree is connected");
            }
        }
        let t = self.t as i64;
        let predicted_sigma_tt = 18 * t * t - 12 * t + 6 * (t - counts[3] as i64) - 2 * counts[2] as i64;
        Ok(CoverProfile { counts, sigma_tt, predicted_sigma_tt })
    }

    /// Subsets fully attached in a budget-feasible tree; must form an exact cover.
    pub fn extract_exact_cover(&self, tree_ids: &[EdgeId]) -> Result<Vec<usize>, GadgetError> {
        let n = self.graph.node_count();
        if tree_ids.len() > n - 1 {
            return Err(GadgetError::WitnessInfeasible(format!("{} edges exceed |V| - 1", tree_ids.len())));
        }
        let mask = self.graph.mask_of(tree_ids)?;
        if !is_connected_masked(&self.graph, &mask) {
            return Err(GadgetError::WitnessInfeasible("tree is disconnected".into()));
        }
        let sub = self.graph.spanning_subgraph(tree_ids)?;
        let sum = all_pairs_distances(&sub).unordered_sum().expect("connected");
        if sum > self.distance_budget {
            return Err(GadgetError::WitnessInfeasible(format!(
                "distance sum {sum} exceeds budget {}",
                self.distance_budget
            )));
        }
        let chosen: Vec<usize> = (0..self.k())
            .filter(|&i| sub.neighbors(self.subset_node(i)).filter(|&v| self.is_element_node(v)).count() == 3)
            .collect();
        let mut seen = vec![false; 3 * self.t];
        for &i in &chosen {
            for &e in &self.subsets[i] {
                if std::mem::replace(&mut seen[e], true) {
                    return Err(GadgetError::NotACover);
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(GadgetError::NotACover);
        }
        Ok(chosen)
    }

    fn spanning_tree(&self, ids: &[EdgeId]) -> Result<Graph, GadgetError> {
        let mask = self.graph.mask_of(ids)?;
        let count = mask.iter().filter(|&&m| m).count();
        if count + 1 != self.graph.node_count() || !is_connected_masked(&self.graph, &mask) {
            return Err(GadgetError::NotSpanningTree);
        }
        Ok(self.graph.spanning_subgraph(ids)?)
    }

    /// Whether each element node has exactly one subset neighbour in the tree.
    pub fn elements_singly_attached(&self, ids: &[EdgeId]) -> bool {
        let Ok(tree) = self.graph.spanning_subgraph(ids) else {
            return false;
        };
        (0..3 * self.t).all(|j| tree.neighbors(self.element_node(j)).filter(|&v| self.is_subset_node(v)).count() == 1)
    }

    /// Whether every `P_0`-subset edge is present.
    pub fn has_all_hub_edges(&self, ids: &[EdgeId]) -> bool {
        (0..self.k()).all(|i| {
            let id = self.graph.find_edge(0, self.subset_node(i)).expect("hub edge");
            ids.contains(&id)
        })
    }

    /// Pad edges `(P_0, P_i)`.
    pub fn pad_edges(&self) -> Vec<EdgeId> {
        (1..=self.pad_count as usize).map(|i| self.graph.find_edge(0, i).expect("pad edge")).collect()
    }
}

/// Builds the gadget. `overrides` supplies `(r, C)` for instances whose exact
/// cover is unknown or absent; otherwise both come from the canonical tree of
/// a backtracking-found cover.
pub fn build_ecsts_gadget(
    t: usize,
    subsets: &[[usize; 3]],
    overrides: Option<(u64, u64)>,
) -> Result<EcstsGadget, GadgetError> {
    if t == 0 {
        return Err(GadgetError::EmptyValues);
    }
    for (index, s) in subsets.iter().enumerate() {
        if s.iter().any(|&e| e >= 3 * t) || s[0] == s[1] || s[0] == s[2] || s[1] == s[2] {
            return Err(GadgetError::MalformedSubset { index });
        }
    }
    let cover = find_exact_cover(t, subsets);
    let k = subsets.len();

    let (pad_count, distance_budget) = match (overrides, &cover) {
        (Some(rc), _) => rc,
        (None, None) => return Err(GadgetError::NoExactCover),
        (None, Some(cover)) => {
            // S/T distances do not involve the pads, so price them on the hub alone.
            let core = layout(t, subsets, 0)?;
            let tree = canonical_tree(&core, t, subsets, cover, 0);
            let sub = core.spanning_subgraph(&tree)?;
            let dist = all_pairs_distances(&sub);
            let s_nodes: Vec<NodeId> = (1..=k).collect();
            let t_nodes: Vec<NodeId> = (k + 1..k + 1 + 3 * t).collect();
            let r = sigma(&dist, &s_nodes, &s_nodes) + sigma(&dist, &s_nodes, &t_nodes) + sigma(&dist, &t_nodes, &t_nodes);
            let tt = sigma(&dist, &t_nodes, &t_nodes);
            let expected = 18 * t * t - 12 * t;
            if tt != expected as u64 {
                return Err(GadgetError::InvariantViolated(format!("canonical element sum {tt} != {expected}")));
            }

            let full = layout(t, subsets, r as usize)?;
            let tree = canonical_tree(&full, t, subsets, cover, r as usize);
            let dist = all_pairs_distances(&full.spanning_subgraph(&tree)?);
            let pads: Vec<NodeId> = (0..=r as usize).collect();
            let s_nodes: Vec<NodeId> = (r as usize + 1..r as usize + 1 + k).collect();
            let t_nodes: Vec<NodeId> = (r as usize + 1 + k..full.node_count()).collect();
            let c = sigma(&dist, &pads, &pads) + sigma(&dist, &pads, &s_nodes) + sigma(&dist, &pads, &t_nodes) + r;
            (r, c)
        }
    };
    let graph = layout(t, subsets, pad_count as usize)?;
    let canonical = match (&cover, overrides) {
        (Some(cover), None) => Some(canonical_tree(&graph, t, subsets, cover, pad_count as usize)),
        _ => None,
    };
    if let Some(tree) = &canonical {
        if tree.len() + 1 != graph.node_count() || !is_connected_masked(&graph, &graph.mask_of(tree)?) {
            return Err(GadgetError::InvariantViolated("canonical tree does not span".into()));
        }
    }
    Ok(EcstsGadget {
        t,
        subsets: subsets.to_vec(),
        pad_count,
        distance_budget,
        graph,
        canonical_tree: canonical,
        cover,
    })
}

fn layout(t: usize, subsets: &[[usize; 3]], pads: usize) -> Result<Graph, GadgetError> {
    let k = subsets.len();
    let m0 = pads + 1;
    let t0 = m0 + k;
    let mut edges: Vec<(NodeId, NodeId)> = (1..=pads).map(|i| (0, i)).collect();
    for (i, s) in subsets.iter().enumerate() {
        edges.push((0, m0 + i));
        edges.extend(s.iter().map(|&e| (m0 + i, t0 + e)));
    }
    Ok(Graph::unweighted(t0 + 3 * t, edges)?)
}

fn canonical_tree(g: &Graph, t: usize, subsets: &[[usize; 3]], cover: &[usize], pads: usize) -> Vec<EdgeId> {
    let k = subsets.len();
    let (m0, t0) = (pads + 1, pads + 1 + k);
    let mut ids: Vec<EdgeId> = (1..=pads).map(|i| g.find_edge(0, i).unwrap()).collect();
    ids.extend((0..k).map(|i| g.find_edge(0, m0 + i).unwrap()));
    for &i in cover {
        ids.extend(subsets[i].iter().map(|&e| g.find_edge(m0 + i, t0 + e).unwrap()));
    }
    debug_assert_eq!(ids.len(), pads + k + 3 * t);
    ids.sort_unstable();
    ids
}

fn sigma(dist: &crate::graph::DistanceMatrix, a: &[NodeId], b: &[NodeId]) -> u64 {
    // unordered pairs between (or within) the two groups
    let mut total = 0;
    let same = a == b;
    for (i, &x) in a.iter().enumerate() {
        let rest = if same { &b[i + 1..] } else { b };
        for &y in rest {
            total += dist.get(x, y).finite().expect("tree is connected");
        }
    }
    total
}

/// First exact cover in index order, by backtracking on the lowest uncovered element.
pub fn find_exact_cover(t: usize, subsets: &[[usize; 3]]) -> Option<Vec<usize>> {
    fn go(covered: &mut Vec<bool>, subsets: &[[usize; 3]], chosen: &mut Vec<usize>) -> bool {
        let Some(first) = covered.iter().position(|&c| !c) else {
            return true;
        };
        for (i, s) in subsets.iter().enumerate() {
            if s.contains(&first) && s.iter().all(|&e| !covered[e]) {
                s.iter().for_each(|&e| covered[e] = true);
                chosen.push(i);
                if go(covered, subsets, chosen) {
                    return true;
                }
                chosen.pop();
                s.iter().for_each(|&e| covered[e] = false);
            }
        }
        false
    }
    let mut covered = vec![false; 3 * t];
    let mut chosen = Vec::new();
    go(&mut covered, subsets, &mut chosen).then(|| {
        chosen.sort_unstable();
        chosen
    })
}
