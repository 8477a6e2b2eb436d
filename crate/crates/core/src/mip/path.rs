use num_traits::{One, Zero};

use crate::graph::{is_connected, EdgeId, Graph, GraphError, NodeId};
use crate::rational::Rational;
use crate::target::{ResolvedTarget, SpannerTarget};

use super::cuts::{add_x_cuts, Scope};
use super::model::{graph_fingerprint, Formulation, MipModel, ModelMetadata, Sense, VarKey, VarKind};
use super::{EnhancementSet, MipError};

/// Degree-1 nodes split off from the rest of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafReduction {
    /// Non-leaf nodes, ascending.
    pub core: Vec<NodeId>,
    /// Number of leaf neighbours of each node (0 for leaves themselves).
    pub leaf_neighbors: Vec<usize>,
    /// Edges with a leaf endpoint, ascending.
    pub leaf_edges: Vec<EdgeId>,
}

impl LeafReduction {
    /// `None` when the graph has no leaves or nothing but leaves.
    pub fn of(g: &Graph) -> Option<Self> {
        let n = g.node_count();
        let is_leaf: Vec<bool> = (0..n).map(|v| g.degree(v) == 1).collect();
        let core: Vec<NodeId> = (0..n).filter(|&v| !is_leaf[v]).collect();
        if core.is_empty() || core.len() == n {
            return None;
        }
        let leaf_neighbors =
            (0..n).map(|v| if is_leaf[v] { 0 } else { g.neighbors(v).filter(|&k| is_leaf[k]).count() }).collect();
        let leaf_edges = (0..g.edge_count()).filter(|&id| is_leaf[g.edge(id).u] || is_leaf[g.edge(id).v]).collect();
        Some(Self { core, leaf_neighbors, leaf_edges })
    }

    /// The reduced distance-sum expression over unordered pairs, given core
    /// path indicators `u(l, i, j)` for `1 <= l <= L`.
    ///
    /// With `extended == false` the leaf terms stop at `L` and `L - 1` as
    /// originally stated, so they undercount pairs whose core distance
    /// reaches those limits. With `extended == true` every term runs to
    /// `L + 1`; that is the form the model's main constraint uses.
    pub fn distance_sum(&self, length_limit: usize, extended: bool, u: impl Fn(usize, NodeId, NodeId) -> bool) -> i128 {
        let l_max = length_limit;
        let ind = |l: usize, i: NodeId, j: NodeId| -> i128 {
            match l {
                0 => 0,
                l if l > l_max => 1,
                l => i128::from(u(l, i, j)),
            }
        };
        // sum_{l=1}^{upper} (l + offset) (u^l - u^{l-1})
        let term = |offset: usize, upper: usize, i: NodeId, j: NodeId| -> i128 {
            (1..=upper).map(|l| (l + offset) as i128 * (ind(l, i, j) - ind(l - 1, i, j))).sum()
        };
        let mut total = 0i128;
        for (a, &i) in self.core.iter().enumerate() {
            let vi = self.leaf_neighbors[i] as i128;
            total += vi + vi * (vi - 1);
            for &j in &self.core[a + 1..] {
                let vj = self.leaf_neighbors[j] as i128;
                let (second, third) = if extended { (l_max + 1, l_max + 1) } else { (l_max, l_max.saturating_sub(1)) };
                total += term(0, l_max + 1, i, j) + (vi + vj) * term(1, second, i, j) + vi * vj * term(2, third, i, j);
            }
        }
        total
    }
}

/// Path model for unit-weight graphs. `u` tracks "joined by a path of at
/// most `l` edges" for each pair; pairs farther apart than `L` count `L + 1`.
pub fn build_path_model(
    g: &Graph,
    target: &SpannerTarget,
    length_limit: usize,
    enh: &EnhancementSet,
) -> Result<MipModel, MipError> {
    if !g.is_unit_weight() {
        return Err(MipError::UnsupportedFormulation { formulation: "path", requirement: "unit edge weights" });
    }
    let resolved = prepare(g, target)?;
    let max = g.node_count() - 1;
    if !(1..=max).contains(&length_limit) {
        return Err(MipError::LengthOutOfRange { value: length_limit, max });
    }
    let mut warnings = Vec::new();
    let mut scope = Scope::full(g);
    let mut leaves = None;
    if enh.leaf_reduction {
        match LeafReduction::of(g) {
            Some(red) => {
                for &id in &red.leaf_edges {
                    scope.fixed[id] = true;
                }
                scope.in_core = vec![false; g.node_count()];
                for &v in &red.core {
                    scope.in_core[v] = true;
                }
                leaves = Some(red);
            }
            None => warnings.push("leaf reduction requested but the graph has no reducible leaves; ignored".into()),
        }
    }
    let kind = if enh.relax_path_integrality { VarKind::Continuous } else { VarKind::Binary };
    let spec = Spec {
        formulation: Formulation::Path,
        length_limit,
        kind,
        lower_bounds: !enh.relax_path_integrality,
        leaves: leaves.as_ref(),
        warnings,
    };
    let mut model = build(g, &scope, &resolved, spec)?;
    add_x_cuts(&mut model, &scope, enh, &resolved.bound)?;
    Ok(model)
}

/// Path model for integer weights: `u` tracks "joined by a path of weight at
/// most `l`". Leaf reduction is not available here and is reported as a
/// warning; relaxation makes `u`, `y` continuous.
pub fn build_weighted_path_model(
    g: &Graph,
    target: &SpannerTarget,
    length_limit: usize,
    enh: &EnhancementSet,
) -> Result<MipModel, MipError> {
    let resolved = prepare(g, target)?;
    let max = (g.node_count() - 1).saturating_mul(g.max_weight() as usize);
    if !(1..=max).contains(&length_limit) {
        return Err(MipError::LengthOutOfRange { value: length_limit, max });
    }
    let mut warnings = Vec::new();
    if enh.leaf_reduction {
        warnings.push("leaf reduction applies to the unit path model only; ignored".to_string());
    }
    let scope = Scope::full(g);
    let spec = Spec {
        formulation: Formulation::WeightedPath,
        length_limit,
        kind: if enh.relax_path_integrality { VarKind::Continuous } else { VarKind::Binary },
        lower_bounds: false,
        leaves: None,
        warnings,
    };
    let mut model = build(g, &scope, &resolved, spec)?;
    add_x_cuts(&mut model, &scope, enh, &resolved.bound)?;
    Ok(model)
}

fn prepare(g: &Graph, target: &SpannerTarget) -> Result<ResolvedTarget, MipError> {
    if g.node_count() < 2 {
        return Err(GraphError::TooFewNodes(g.node_count()).into());
    }
    if !is_connected(g) {
        return Err(GraphError::Disconnected.into());
    }
    Ok(target.resolve_for(g)?)
}

struct Spec<'a> {
    formulation: Formulation,
    length_limit: usize,
    /// Kind of `u` and `y`; `x` is always binary.
    kind: VarKind,
    lower_bounds: bool,
    leaves: Option<&'a LeafReduction>,
    warnings: Vec<String>,
}

fn build(g: &Graph, scope: &Scope<'_>, resolved: &ResolvedTarget, spec: Spec<'_>) -> Result<MipModel, MipError> {
    let n = g.node_count();
    let big_l = spec.length_limit;
    let one = Rational::one();
    let zero = Rational::zero();
    let core = scope.core_nodes();
    let pairs: Vec<(NodeId, NodeId)> =
        core.iter().enumerate().flat_map(|(a, &i)| core[a + 1..].iter().map(move |&j| (i, j))).collect();
    // core neighbours with the connecting weight
    let nbrs: Vec<Vec<(NodeId, u64)>> = (0..n)
        .map(|i| {
            let mut v: Vec<_> = g
                .adjacency(i)
                .iter()
                .filter(|&&(_, id)| scope.modeled(id))
                .map(|&(k, id)| (k, g.edge(id).weight))
                .collect();
            v.sort_unstable();
            v
        })
        .collect();
    let u_key = |l: usize, a: NodeId, b: NodeId| VarKey::U { l, i: a.min(b), j: a.max(b) };
    let x_key = |a: NodeId, b: NodeId| VarKey::X { i: a.min(b), j: a.max(b) };
    // y^l_{ikj} exists when the first hop fits strictly inside l
    let y_ks = |l: usize, i: NodeId, j: NodeId| -> Vec<(NodeId, u64)> {
        nbrs[i].iter().copied().filter(|&(k, w)| k != j && (w as usize) < l).collect()
    };

    let mut model = MipModel::new(ModelMetadata {
        formulation: spec.formulation,
        length_limit: Some(big_l),
        fingerprint: graph_fingerprint(g),
        bound: resolved.bound,
        fixed_edges: (0..g.edge_count()).filter(|&id| scope.fixed[id]).map(|id| (g.edge(id).u, g.edge(id).v)).collect(),
        warnings: spec.warnings,
    });
    for id in (0..g.edge_count()).filter(|&id| scope.modeled(id)) {
        let e = g.edge(id);
        let x = model.add_unit(VarKey::X { i: e.u, j: e.v }, VarKind::Binary);
        model.objective.push((x, one));
    }
    for l in 1..=big_l {
        for &(i, j) in &pairs {
            model.add_unit(VarKey::U { l, i, j }, spec.kind);
        }
    }
    for l in 2..=big_l {
        for &(i, j) in &pairs {
            for (k, _) in y_ks(l, i, j) {
                model.add_unit(VarKey::Y { l, i, k, j }, spec.kind);
            }
        }
    }

    // main: sum_pairs c_ij (L + 1 + extra - sum_l u) + leaf constants <= limit
    let limit = resolved.distance_sum_limit(n);
    let v = |i: NodeId| spec.leaves.map_or(0, |r| r.leaf_neighbors[i]) as i128;
    let mut constant = 0i128;
    let mut terms = Vec::new();
    let lp1 = big_l as i128 + 1;
    for &i in &core {
        constant += v(i) + v(i) * (v(i) - 1);
    }
    for &(i, j) in &pairs {
        let (vi, vj) = (v(i), v(j));
        constant += lp1 + (vi + vj) * (lp1 + 1) + vi * vj * (lp1 + 2);
        let c = Rational::from_integer((1 + vi) * (1 + vj));
        for l in 1..=big_l {
            terms.push((model.var(VarKey::U { l, i, j }), -c));
        }
    }
    let rhs = limit - Rational::from_integer(constant);
    if terms.is_empty() {
        if rhs < zero {
            return Err(MipError::Malformed("fixed leaf distances alone exceed the bound".into()));
        }
    } else {
        model.add_constraint("main", terms, Sense::Le, rhs);
    }

    for &(i, j) in &pairs {
        let u1 = model.var(VarKey::U { l: 1, i, j });
        let direct = nbrs[i].iter().find(|&&(k, _)| k == j).map(|&(_, w)| w);
        match direct {
            Some(1) => {
                let x = model.var(x_key(i, j));
                model.add_constraint(format!("lnk_{i}_{j}"), vec![(u1, one), (x, -one)], Sense::Eq, zero);
            }
            _ => model.add_constraint(format!("lnk_{i}_{j}"), vec![(u1, one)], Sense::Eq, zero),
        }
    }
    for l in 2..=big_l {
        for &(i, j) in &pairs {
            let u = model.var(VarKey::U { l, i, j });
            let prev = model.var(VarKey::U { l: l - 1, i, j });
            model.add_constraint(format!("mono_{l}_{i}_{j}"), vec![(u, one), (prev, -one)], Sense::Ge, zero);

            let direct = nbrs[i].iter().find(|&&(k, _)| k == j).filter(|&&(_, w)| w as usize <= l);
            let mut reach: Vec<usize> = direct.map(|_| model.var(x_key(i, j))).into_iter().collect();
            reach.extend(y_ks(l, i, j).into_iter().map(|(k, _)| model.var(VarKey::Y { l, i, k, j })));
            let mut ub = vec![(u, one)];
            ub.extend(reach.iter().map(|&r| (r, -one)));
            model.add_constraint(format!("ub_{l}_{i}_{j}"), ub, Sense::Le, zero);
            if spec.lower_bounds {
                let inv = Rational::new(1, nbrs[i].len().max(1) as i128);
                let mut lb = vec![(u, one)];
                lb.extend(reach.iter().map(|&r| (r, -inv)));
                model.add_constraint(format!("lb_{l}_{i}_{j}"), lb, Sense::Ge, zero);
            }
        }
        for &(i, j) in &pairs {
            for (k, w) in y_ks(l, i, j) {
                let y = model.var(VarKey::Y { l, i, k, j });
                let x = model.var(x_key(i, k));
                let before = model.var(u_key(l - w as usize, k, j));
                model.add_constraint(format!("yx_{l}_{i}_{k}_{j}"), vec![(y, one), (x, -one)], Sense::Le, zero);
                model.add_constraint(format!("yu_{l}_{i}_{k}_{j}"), vec![(y, one), (before, -one)], Sense::Le, zero);
                if spec.lower_bounds {
                    model.add_constraint(
                        format!("ylb_{l}_{i}_{k}_{j}"),
                        vec![(y, one), (x, -one), (before, -one)],
                        Sense::Ge,
                        -one,
                    );
                }
            }
        }
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs_distances, Distance};

    fn stretch(p: i128, q: i128) -> SpannerTarget {
        SpannerTarget::Stretch(Rational::new(p, q))
    }

    #[test]
    fn k3_counts_and_rhs() {
        let g = Graph::complete(3);
        let m = build_path_model(&g, &stretch(4, 3), 2, &EnhancementSet::default()).unwrap();
        let vars = m.variable_counts();
        assert_eq!((vars["x"], vars["u"], vars["y"]), (3, 6, 3));
        let fam = m.family_counts();
        assert_eq!((fam["lnk"], fam["mono"], fam["ub"], fam["lb"]), (3, 3, 3, 3));
        assert_eq!((fam["yx"], fam["yu"], fam["ylb"]), (3, 3, 3));
        // -sum u <= 4 - 3 * 3
        assert_eq!(m.constraint("main").unwrap().rhs, Rational::from_integer(-5));
        m.check_references().unwrap();
    }

    #[test]
    fn range_and_weight_checks() {
        let g = Graph::path(4);
        let t = stretch(1, 1);
        assert!(matches!(
            build_path_model(&g, &t, 4, &EnhancementSet::default()),
            Err(MipError::LengthOutOfRange { value: 4, max: 3 })
        ));
        assert!(build_path_model(&g, &t, 0, &EnhancementSet::default()).is_err());
        let w = Graph::new(2, [(0, 1, 2)]).unwrap();
        assert!(build_path_model(&w, &t, 1, &EnhancementSet::default()).is_err());
        assert!(build_weighted_path_model(&w, &t, 2, &EnhancementSet::default()).is_ok());
        assert!(build_weighted_path_model(&w, &t, 3, &EnhancementSet::default()).is_err());
    }

    #[test]
    fn weighted_single_edge() {
        let g = Graph::new(2, [(0, 1, 2)]).unwrap();
        let m = build_weighted_path_model(&g, &stretch(1, 1), 2, &EnhancementSet::default()).unwrap();
        let lnk = m.constraint("lnk_0_1").unwrap();
        assert_eq!(lnk.terms.len(), 1);
        let ub = m.constraint("ub_2_0_1").unwrap();
        assert_eq!(ub.terms.len(), 2);
        assert_eq!(m.variable_counts().get("y"), None);
        let big = Graph::new(3, [(0, 1, 2), (1, 2, 1), (0, 2, 3)]).unwrap();
        let m = build_weighted_path_model(&big, &stretch(1, 1), 3, &EnhancementSet::default()).unwrap();
        // y_3_0_1_2 uses u at level 3 - 2 = 1
        let yu = m.constraint("yu_3_0_1_2").unwrap();
        assert_eq!(yu.terms[1].0, m.var(VarKey::U { l: 1, i: 1, j: 2 }));
    }

    #[test]
    fn weighted_matches_relaxed_unit_on_k3() {
        let g = Graph::complete(3);
        let relaxed = EnhancementSet { relax_path_integrality: true, ..Default::default() };
        for l in 1..=2 {
            let a = build_path_model(&g, &stretch(4, 3), l, &relaxed).unwrap();
            let b = build_weighted_path_model(&g, &stretch(4, 3), l, &EnhancementSet::default()).unwrap();
            assert_eq!(a.constraints, b.constraints);
            let full = build_path_model(&g, &stretch(4, 3), l, &EnhancementSet::default()).unwrap();
            let without_lb: Vec<_> =
                full.constraints.into_iter().filter(|c| c.family() != "lb" && c.family() != "ylb").collect();
            assert_eq!(without_lb, b.constraints);
        }
    }

    #[test]
    fn leaf_expression_on_star() {
        let g = Graph::unweighted(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let red = LeafReduction::of(&g).unwrap();
        assert_eq!(red.core, vec![0]);
        let dist = all_pairs_distances(&g);
        let u = |l: usize, i: usize, j: usize| dist.get(i, j) <= Distance::Finite(l as u64);
        assert_eq!(red.distance_sum(3, false, u), 9);
        let m = build_path_model(&g, &stretch(1, 1), 2, &EnhancementSet { leaf_reduction: true, ..Default::default() })
            .unwrap();
        assert!(m.variables.is_empty());
        assert_eq!(m.metadata.objective_offset(), 3);
    }

    #[test]
    fn leafless_reduction_warns() {
        let g = Graph::complete(4);
        let m = build_path_model(&g, &stretch(1, 1), 1, &EnhancementSet { leaf_reduction: true, ..Default::default() })
            .unwrap();
        assert_eq!(m.metadata.warnings.len(), 1);
        assert_eq!(m.variable_counts()["x"], 6);
    }
}
