use num_traits::One;

use crate::graph::{apl_masked, is_connected_masked, EdgeId, Graph, NodeId};
use crate::rational::Rational;

use super::model::{MipModel, Sense, VarKey};
use super::{EnhancementSet, MipError};

/// Which nodes and edges the model actually carries.
pub(crate) struct Scope<'a> {
    pub g: &'a Graph,
    pub in_core: Vec<bool>,
    /// Edges fixed to selected outside the model.
    pub fixed: Vec<bool>,
}

impl<'a> Scope<'a> {
    pub fn full(g: &'a Graph) -> Self {
        Self { g, in_core: vec![true; g.node_count()], fixed: vec![false; g.edge_count()] }
    }

    pub fn modeled(&self, id: EdgeId) -> bool {
        let e = self.g.edge(id);
        self.in_core[e.u] && self.in_core[e.v]
    }

    pub fn core_nodes(&self) -> Vec<NodeId> {
        (0..self.g.node_count()).filter(|&v| self.in_core[v]).collect()
    }

    fn x(&self, model: &MipModel, id: EdgeId) -> usize {
        let e = self.g.edge(id);
        model.var(VarKey::X { i: e.u, j: e.v })
    }
}

/// Appends the x-only inequalities requested in `enh`. Pools are checked
/// against the graph and the bound first.
pub(crate) fn add_x_cuts(model: &mut MipModel, scope: &Scope<'_>, enh: &EnhancementSet, bound: &Rational) -> Result<(), MipError> {
    let g = scope.g;
    let one = Rational::one();
    let core = scope.core_nodes();
    if enh.isolated_node_cuts && core.len() > 1 {
        for &i in &core {
            let terms: Vec<_> = g
                .adjacency(i)
                .iter()
                .filter(|&&(_, id)| scope.modeled(id))
                .map(|&(_, id)| (scope.x(model, id), one))
                .collect();
            if !terms.is_empty() {
                model.add_constraint(format!("iso_{i}"), terms, Sense::Ge, one);
            }
        }
    }
    if enh.connectivity_lb_cut && core.len() > 1 {
        let terms: Vec<_> = (0..g.edge_count()).filter(|&id| scope.modeled(id)).map(|id| (scope.x(model, id), one)).collect();
        model.add_constraint("conn", terms, Sense::Ge, Rational::from_integer(core.len() as i128 - 1));
    }
    for (index, cut) in enh.edge_cut_pool.iter().enumerate() {
        let mask = removal_mask(g, cut, "edge", index)?;
        if is_connected_masked(g, &mask) {
            return Err(MipError::InvalidCut { pool: "edge", index, reason: "graph stays connected without it".into() });
        }
        push_cover(model, scope, cut, format!("ecut_{index}"));
    }
    for (index, cut) in enh.apl_cut_pool.iter().enumerate() {
        let mask = removal_mask(g, cut, "apl", index)?;
        let rest = apl_masked(g, &mask)?;
        if rest.within(bound) {
            return Err(MipError::InvalidCut { pool: "apl", index, reason: "APL stays within the bound without it".into() });
        }
        push_cover(model, scope, cut, format!("dcut_{index}"));
    }
    Ok(())
}

fn removal_mask(g: &Graph, cut: &[EdgeId], pool: &'static str, index: usize) -> Result<Vec<bool>, MipError> {
    if cut.is_empty() {
        return Err(MipError::InvalidCut { pool, index, reason: "empty edge set".into() });
    }
    if let Some(&bad) = cut.iter().find(|&&id| id >= g.edge_count()) {
        return Err(MipError::InvalidCut { pool, index, reason: format!("edge id {bad} is not in the graph") });
    }
    let mut mask = vec![true; g.edge_count()];
    cut.iter().for_each(|&id| mask[id] = false);
    Ok(mask)
}

/// `sum x_e >= 1` over the cut; already met when it holds a fixed edge.
fn push_cover(model: &mut MipModel, scope: &Scope<'_>, cut: &[EdgeId], name: String) {
    if cut.iter().any(|&id| scope.fixed[id]) {
        return;
    }
    let mut ids = cut.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let one = Rational::one();
    let terms = ids.into_iter().filter(|&id| scope.modeled(id)).map(|id| (scope.x(model, id), one)).collect();
    model.add_constraint(name, terms, Sense::Ge, one);
}
