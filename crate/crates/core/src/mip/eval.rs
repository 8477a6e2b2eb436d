use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::graph::{all_pairs_distances_masked, Distance, EdgeId, Graph};
use crate::rational::Rational;

use super::model::{MipModel, Sense, VarKey, VarKind};
use super::solver::SOLUTION_TOLERANCE;
use super::MipError;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCheck {
    pub name: String,
    pub lhs: f64,
    pub sense: Sense,
    pub rhs: f64,
    /// How far the constraint is from holding; 0 when satisfied.
    pub violation: f64,
}

impl ConstraintCheck {
    pub fn satisfied(&self) -> bool {
        self.violation <= SOLUTION_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub checks: Vec<ConstraintCheck>,
    /// Variables outside their bounds or fractional binaries.
    pub bound_violations: Vec<String>,
    /// Model objective plus the edges fixed outside the model.
    pub objective: f64,
}

impl EvaluationReport {
    pub fn satisfied(&self) -> bool {
        self.bound_violations.is_empty() && self.checks.iter().all(ConstraintCheck::satisfied)
    }

    pub fn violated(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.checks.iter().filter(|c| !c.satisfied())
    }

    pub fn check(&self, name: &str) -> Option<&ConstraintCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn f(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Checks values given in model variable order.
pub fn evaluate_values(model: &MipModel, values: &[f64]) -> Result<EvaluationReport, MipError> {
    if values.len() != model.variables.len() {
        return Err(MipError::Malformed(format!(
            "assignment has {} values for {} variables",
            values.len(),
            model.variables.len()
        )));
    }
    let tol = SOLUTION_TOLERANCE;
    let mut bound_violations = Vec::new();
    for (v, &val) in model.variables.iter().zip(values) {
        let below = val < f(&v.lower) - tol;
        let above = v.upper.as_ref().is_some_and(|u| val > f(u) + tol);
        let fractional = v.kind == VarKind::Binary && (val - val.round()).abs() > tol;
        if below || above || fractional {
            bound_violations.push(format!("{} = {val}", v.name));
        }
    }
    let dot = |terms: &[(usize, Rational)]| terms.iter().map(|(i, c)| f(c) * values[*i]).sum::<f64>();
    let checks = model
        .constraints
        .iter()
        .map(|c| {
            let lhs = dot(&c.terms);
            let rhs = f(&c.rhs);
            let violation = match c.sense {
                Sense::Le => (lhs - rhs).max(0.0),
                Sense::Ge => (rhs - lhs).max(0.0),
                Sense::Eq => (lhs - rhs).abs(),
            };
            ConstraintCheck { name: c.name.clone(), lhs, sense: c.sense, rhs, violation }
        })
        .collect();
    let objective = dot(&model.objective) + model.metadata.objective_offset() as f64;
    Ok(EvaluationReport { checks, bound_violations, objective })
}

/// Checks a name-to-value map; every declared variable must be present.
pub fn evaluate_assignment(model: &MipModel, assignment: &HashMap<String, f64>) -> Result<EvaluationReport, MipError> {
    let values = model
        .variables
        .iter()
        .map(|v| assignment.get(&v.name).copied().ok_or_else(|| MipError::MissingVariable(v.name.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    evaluate_values(model, &values)
}

pub fn assignment_map(model: &MipModel, values: &[f64]) -> HashMap<String, f64> {
    model.variables.iter().zip(values).map(|(v, &x)| (v.name.clone(), x)).collect()
}

/// The assignment a selected edge set induces: `u` from true distances in
/// the selection, `y` from the first hop, and unit flows along shortest
/// paths (ties broken towards the smallest predecessor id).
pub fn lift_assignment(model: &MipModel, g: &Graph, selected: &[EdgeId]) -> Result<Vec<f64>, MipError> {
    let mask = g.mask_of(selected)?;
    let dist = all_pairs_distances_masked(g, Some(&mask));
    let within = |a: usize, b: usize, l: i64| l >= 0 && dist.get(a, b) <= Distance::Finite(l as u64);
    let chosen = |a: usize, b: usize| -> Result<bool, MipError> {
        g.find_edge(a, b).map(|id| mask[id]).ok_or_else(|| MipError::Malformed(format!("no edge ({a}, {b}) in the graph")))
    };
    let mut flows: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    let mut values = Vec::with_capacity(model.variables.len());
    for v in &model.variables {
        let key = v.key().ok_or_else(|| MipError::Malformed(format!("unrecognized variable {}", v.name)))?;
        let on = match key {
            VarKey::X { i, j } => chosen(i, j)?,
            VarKey::U { l, i, j } => within(i, j, l as i64),
            VarKey::Y { l, i, k, j } => {
                let w = g.weight_between(i, k).ok_or_else(|| MipError::Malformed(format!("no edge ({i}, {k})")))?;
                chosen(i, k)? && within(k, j, l as i64 - w as i64)
            }
            VarKey::F { s, t, i, j } => {
                let arcs = flows.entry((s, t)).or_insert_with(|| route(g, &mask, &dist, s, t));
                arcs.contains(&(i, j))
            }
        };
        values.push(if on { 1.0 } else { 0.0 });
    }
    Ok(values)
}

fn route(g: &Graph, mask: &[bool], dist: &crate::graph::DistanceMatrix, s: usize, t: usize) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    let Distance::Finite(_) = dist.get(s, t) else {
        return arcs;
    };
    let mut cur = t;
    while cur != s {
        let d_cur = dist.get(s, cur);
        let prev = g
            .adjacency(cur)
            .iter()
            .filter(|&&(_, id)| mask[id])
            .filter(|&&(p, id)| dist.get(s, p).plus(g.edge(id).weight) == d_cur)
            .map(|&(p, _)| p)
            .min()
            .expect("a finite distance has a predecessor");
        arcs.push((prev, cur));
        cur = prev;
    }
    arcs
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::mip::{build_flow_model, build_path_model, build_weighted_path_model, EnhancementSet};
    use crate::target::SpannerTarget;

    fn t43() -> SpannerTarget {
        SpannerTarget::Stretch(Rational::new(4, 3))
    }

    #[test]
    fn full_k3_flow_is_feasible() {
        let g = Graph::complete(3);
        let m = build_flow_model(&g, &t43(), &EnhancementSet::default()).unwrap();
        let vals = lift_assignment(&m, &g, &[0, 1, 2]).unwrap();
        let rep = evaluate_values(&m, &vals).unwrap();
        assert!(rep.satisfied(), "{:?}", rep.violated().collect::<Vec<_>>());
        assert_eq!(rep.objective, 3.0);
    }

    #[test]
    fn all_zero_breaks_main() {
        let g = Graph::complete(4);
        let m = build_path_model(&g, &t43(), 2, &EnhancementSet::default()).unwrap();
        let rep = evaluate_values(&m, &vec![0.0; m.variables.len()]).unwrap();
        assert!(!rep.check("main").unwrap().satisfied());
    }

    #[test]
    fn star_lift_matches_distance_sum() {
        let g = Graph::unweighted(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let m = build_path_model(&g, &SpannerTarget::Stretch(Rational::one()), 2, &EnhancementSet::default()).unwrap();
        let vals = lift_assignment(&m, &g, &[0, 1, 2]).unwrap();
        let rep = evaluate_values(&m, &vals).unwrap();
        assert!(rep.satisfied());
        // sum_pairs (L + 1 - sum u) recovered from the main row
        let main = rep.check("main").unwrap();
        assert_eq!(main.lhs + 6.0 * 3.0, 9.0);
    }

    #[test]
    fn missing_variable_is_reported() {
        let g = Graph::complete(3);
        let m = build_weighted_path_model(&g, &t43(), 2, &EnhancementSet::default()).unwrap();
        let mut map = assignment_map(&m, &lift_assignment(&m, &g, &[0, 1]).unwrap());
        assert!(evaluate_assignment(&m, &map).unwrap().satisfied());
        map.remove("x_0_1");
        assert!(matches!(evaluate_assignment(&m, &map), Err(MipError::MissingVariable(n)) if n == "x_0_1"));
    }
}
