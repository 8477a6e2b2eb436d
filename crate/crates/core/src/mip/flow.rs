use num_traits::{One, Zero};

use crate::graph::{is_connected, Graph, GraphError};
use crate::rational::Rational;
use crate::target::SpannerTarget;

use super::cuts::{add_x_cuts, Scope};
use super::model::{graph_fingerprint, Formulation, MipModel, ModelMetadata, Sense, VarKey, VarKind};
use super::{EnhancementSet, MipError};

/// Multicommodity flow model: one unit of flow per pair `s < t`, continuous
/// in `[0, 1]` on both directions of every edge and capped by `x`.
///
/// Path-specific enhancements (relaxation, leaf reduction) do not apply and
/// are reported as warnings; the x-only cuts are added as requested.
pub fn build_flow_model(g: &Graph, target: &SpannerTarget, enh: &EnhancementSet) -> Result<MipModel, MipError> {
    if !g.is_unit_weight() {
        return Err(MipError::UnsupportedFormulation { formulation: "flow", requirement: "unit edge weights" });
    }
    if !is_connected(g) {
        return Err(GraphError::Disconnected.into());
    }
    let resolved = target.resolve_for(g)?;
    let n = g.node_count();
    let mut warnings = Vec::new();
    if enh.relax_path_integrality {
        warnings.push("integrality relaxation applies to path models only; ignored".to_string());
    }
    if enh.leaf_reduction {
        warnings.push("leaf reduction applies to the unit path model only; ignored".to_string());
    }
    let mut model = MipModel::new(ModelMetadata {
        formulation: Formulation::Flow,
        length_limit: None,
        fingerprint: graph_fingerprint(g),
        bound: resolved.bound,
        fixed_edges: Vec::new(),
        warnings,
    });

    let one = Rational::one();
    for e in g.edges() {
        let x = model.add_unit(VarKey::X { i: e.u, j: e.v }, VarKind::Binary);
        model.objective.push((x, one));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (s + 1..n).map(move |t| (s, t))).collect();
    for &(s, t) in &pairs {
        for e in g.edges() {
            model.add_unit(VarKey::F { s, t, i: e.u, j: e.v }, VarKind::Continuous);
            model.add_unit(VarKey::F { s, t, i: e.v, j: e.u }, VarKind::Continuous);
        }
    }

    let all_flow: Vec<_> = model
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| v.name.starts_with("f_"))
        .map(|(id, _)| (id, one))
        .collect();
    model.add_constraint("main", all_flow, Sense::Le, resolved.distance_sum_limit(n));

    for &(s, t) in &pairs {
        let f = |model: &MipModel, i: usize, j: usize| model.var(VarKey::F { s, t, i, j });
        // out(v) - in(v) over the arcs at v
        let net_out = |model: &MipModel, v: usize, sign: Rational| -> Vec<(usize, Rational)> {
            g.neighbors(v).flat_map(|k| [(f(model, v, k), sign), (f(model, k, v), -sign)]).collect()
        };
        let src = net_out(&model, s, one);
        model.add_constraint(format!("src_{s}_{t}"), src, Sense::Ge, one);
        let snk = net_out(&model, t, -one);
        model.add_constraint(format!("snk_{s}_{t}"), snk, Sense::Ge, one);
        for v in (0..n).filter(|&v| v != s && v != t) {
            let bal = net_out(&model, v, one);
            model.add_constraint(format!("bal_{s}_{t}_{v}"), bal, Sense::Eq, Rational::zero());
        }
        for e in g.edges() {
            let x = model.var(VarKey::X { i: e.u, j: e.v });
            for (i, j) in [(e.u, e.v), (e.v, e.u)] {
                model.add_constraint(
                    format!("cap_{s}_{t}_{i}_{j}"),
                    vec![(f(&model, i, j), one), (x, -one)],
                    Sense::Le,
                    Rational::zero(),
                );
            }
        }
    }
    add_x_cuts(&mut model, &Scope::full(g), enh, &resolved.bound)?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3_counts() {
        let g = Graph::complete(3);
        let m = build_flow_model(&g, &SpannerTarget::Stretch(Rational::new(4, 3)), &EnhancementSet::default()).unwrap();
        let vars = m.variable_counts();
        assert_eq!(vars["x"], 3);
        assert_eq!(vars["f"], 18);
        let fam = m.family_counts();
        assert_eq!((fam["main"], fam["src"], fam["snk"], fam["bal"], fam["cap"]), (1, 3, 3, 3, 18));
        assert_eq!(m.constraint("main").unwrap().rhs, Rational::from_integer(4));
        m.check_references().unwrap();
    }

    #[test]
    fn rejects_weighted_and_disconnected() {
        let w = Graph::new(2, [(0, 1, 2)]).unwrap();
        let t = SpannerTarget::Stretch(Rational::one());
        assert!(matches!(
            build_flow_model(&w, &t, &EnhancementSet::default()),
            Err(MipError::UnsupportedFormulation { .. })
        ));
        let d = Graph::new(3, [(0, 1, 1)]).unwrap();
        assert!(build_flow_model(&d, &t, &EnhancementSet::default()).is_err());
    }
}
