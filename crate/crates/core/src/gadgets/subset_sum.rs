use crate::graph::{all_pairs_distances_masked, is_connected_masked, EdgeId, Graph, NodeId};

use super::GadgetError;

/// Weighted gadget built from a subset-sum instance `(values, target)`.
///
/// Node 0 is the hub `N`; value `i` (0-based) owns nodes `2i + 1` and
/// `2i + 2`. Every edge incident to or between a value's two nodes carries
/// that value as its weight.
#[derive(Debug, Clone)]
pub struct SubsetSumGadget {
    pub values: Vec<u64>,
    pub target: u64,
    pub total: u64,
    /// `2T + b`
    pub weight_budget: u64,
    /// `4kT - b`
    pub distance_budget: u64,
    pub graph: Graph,
    /// Hub edges, two per value.
    pub spoke_edges: Vec<EdgeId>,
    /// `chord_edges[i]` joins the two nodes of value `i`.
    pub chord_edges: Vec<EdgeId>,
}

impl SubsetSumGadget {
    pub fn hub() -> NodeId {
        0
    }

    pub fn value_nodes(i: usize) -> (NodeId, NodeId) {
        (2 * i + 1, 2 * i + 2)
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }

    /// Total weight and unordered distance sum of `ids` (`None` if disconnected).
    pub fn measure(&self, ids: &[EdgeId]) -> (u64, Option<u64>) {
        let mask = self.graph.mask_of(ids).expect("ids belong to the gadget");
        let sum = all_pairs_distances_masked(&self.graph, Some(&mask)).unordered_sum();
        (self.graph.weight_of(ids), sum)
    }

    /// Spoke edges plus the chords of `chosen`.
    pub fn spoke_with_chords(&self, chosen: &[usize]) -> Vec<EdgeId> {
        let mut ids = self.spoke_edges.clone();
        ids.extend(chosen.iter().map(|&i| self.chord_edges[i]));
        ids.sort_unstable();
        ids
    }

    /// Change in (weight, distance sum) when chord `i` joins the spoke subgraph.
    pub fn chord_delta(&self, i: usize) -> (i64, i64) {
        let (w0, s0) = self.measure(&self.spoke_edges);
        let (w1, s1) = self.measure(&self.spoke_with_chords(&[i]));
        let (s0, s1) = (s0.expect("spokes connect"), s1.expect("spokes connect"));
        (w1 as i64 - w0 as i64, s1 as i64 - s0 as i64)
    }
}

pub fn build_subset_sum_gadget(values: &[u64], target: u64) -> Result<SubsetSumGadget, GadgetError> {
    if values.is_empty() {
        return Err(GadgetError::EmptyValues);
    }
    if values.contains(&0) {
        return Err(GadgetError::ZeroValue);
    }
    if target == 0 {
        return Err(GadgetError::ZeroTarget);
    }
    let k = values.len() as u64;
    let total: u64 = values.iter().sum();
    let distance_budget = (4 * k * total)
        .checked_sub(target)
        .ok_or(GadgetError::BudgetUnderflow { target, spoke_sum: 4 * k * total })?;
    let hub = SubsetSumGadget::hub();
    let mut edges = Vec::with_capacity(3 * values.len());
    for (i, &a) in values.iter().enumerate() {
        let (p, q) = SubsetSumGadget::value_nodes(i);
        edges.extend([(hub, p, a), (hub, q, a), (p, q, a)]);
    }
    let graph = Graph::new(2 * values.len() + 1, edges)?;
    let id = |a, b| graph.find_edge(a, b).expect("gadget edge exists");
    let mut spoke_edges = Vec::with_capacity(2 * values.len());
    let mut chord_edges = Vec::with_capacity(values.len());
    for i in 0..values.len() {
        let (p, q) = SubsetSumGadget::value_nodes(i);
        spoke_edges.extend([id(hub, p), id(hub, q)]);
        chord_edges.push(id(p, q));
    }
    spoke_edges.sort_unstable();
    let gadget = SubsetSumGadget {
        values: values.to_vec(),
        target,
        total,
        weight_budget: 2 * total + target,
        distance_budget,
        graph,
        spoke_edges,
        chord_edges,
    };

    let (weight, sum) = gadget.measure(&gadget.spoke_edges);
    if gadget.graph.node_count() != 2 * values.len() + 1 || gadget.graph.edge_count() != 3 * values.len() {
        return Err(GadgetError::InvariantViolated("node or edge count".into()));
    }
    if weight != 2 * total {
        return Err(GadgetError::InvariantViolated(format!("spoke weight {weight} != 2T = {}", 2 * total)));
    }
    if sum != Some(4 * k * total) {
        return Err(GadgetError::InvariantViolated(format!("spoke distance sum {sum:?} != 4kT = {}", 4 * k * total)));
    }
    Ok(gadget)
}

/// Reads the chosen subset off a witness that meets both budgets with equality.
/// Returned indices are 0-based positions in `values`.
pub fn decode_subset_sum(gadget: &SubsetSumGadget, witness: &[EdgeId]) -> Result<Vec<usize>, GadgetError> {
    let mask = gadget.graph.mask_of(witness)?;
    if !is_connected_masked(&gadget.graph, &mask) {
        return Err(GadgetError::WitnessInfeasible("witness is disconnected".into()));
    }
    let (weight, sum) = gadget.measure(witness);
    let sum = sum.expect("connected");
    if weight != gadget.weight_budget || sum != gadget.distance_budget {
        return Err(GadgetError::WitnessInfeasible(format!(
            "need weight {} and distance sum {} exactly, got {weight} and {sum}",
            gadget.weight_budget, gadget.distance_budget
        )));
    }
    let chosen: Vec<usize> = (0..gadget.k()).filter(|&i| mask[gadget.chord_edges[i]]).collect();
    let picked: u64 = chosen.iter().map(|&i| gadget.values[i]).sum();
    if picked != gadget.target {
        return Err(GadgetError::WitnessInfeasible(format!(
            "chords sum to {picked}, not {}",
            gadget.target
        )));
    }
    Ok(chosen)
}
