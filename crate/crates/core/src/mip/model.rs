use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use crate::graph::{Graph, NodeId};
use crate::rational::{terminating_decimal, Rational};

use super::MipError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    Continuous,
}

/// Structured identity of a model variable; each kind has one name pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKey {
    /// `x_i_j`: edge `(i, j)` selected.
    X { i: NodeId, j: NodeId },
    /// `u_l_i_j`: a path of length at most `l` joins `i < j`.
    U { l: usize, i: NodeId, j: NodeId },
    /// `y_l_i_k_j`: such a path leaves `i` through neighbour `k`.
    Y { l: usize, i: NodeId, k: NodeId, j: NodeId },
    /// `f_s_t_i_j`: flow of pair `s < t` on arc `i -> j`.
    F { s: NodeId, t: NodeId, i: NodeId, j: NodeId },
}

impl VarKey {
    pub fn name(&self) -> String {
        match *self {
            VarKey::X { i, j } => format!("x_{i}_{j}"),
            VarKey::U { l, i, j } => format!("u_{l}_{i}_{j}"),
            VarKey::Y { l, i, k, j } => format!("y_{l}_{i}_{k}_{j}"),
            VarKey::F { s, t, i, j } => format!("f_{s}_{t}_{i}_{j}"),
        }
    }

    pub fn parse(name: &str) -> Option<VarKey> {
        let mut parts = name.split('_');
        let head = parts.next()?;
        let nums: Vec<usize> = parts.map(|p| p.parse().ok()).collect::<Option<_>>()?;
        match (head, nums.as_slice()) {
            ("x", &[i, j]) => Some(VarKey::X { i, j }),
            ("u", &[l, i, j]) => Some(VarKey::U { l, i, j }),
            ("y", &[l, i, k, j]) => Some(VarKey::Y { l, i, k, j }),
            ("f", &[s, t, i, j]) => Some(VarKey::F { s, t, i, j }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: Rational,
    pub upper: Option<Rational>,
}

impl Variable {
    pub fn key(&self) -> Option<VarKey> {
        VarKey::parse(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(&self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// `family` or `family_indices`; the family is the text before the first `_`.
    pub name: String,
    /// `(variable index, coefficient)`, each variable at most once.
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Constraint {
    pub fn family(&self) -> &str {
        self.name.split('_').next().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    Flow,
    Path,
    WeightedPath,
}

impl Formulation {
    pub fn tag(&self) -> &'static str {
        match self {
            Formulation::Flow => "flow",
            Formulation::Path => "path",
            Formulation::WeightedPath => "weighted-path",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "flow" => Some(Formulation::Flow),
            "path" => Some(Formulation::Path),
            "weighted-path" => Some(Formulation::WeightedPath),
            _ => None,
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelMetadata {
    pub formulation: Formulation,
    /// Path length limit `L`; `None` for the flow model.
    pub length_limit: Option<usize>,
    pub fingerprint: String,
    /// APL bound the model encodes.
    pub bound: Rational,
    /// Edges fixed outside the model (leaf edges); they add to the objective.
    pub fixed_edges: Vec<(NodeId, NodeId)>,
    pub warnings: Vec<String>,
}

impl ModelMetadata {
    pub fn objective_offset(&self) -> usize {
        self.fixed_edges.len()
    }
}

#[derive(Debug, Clone)]
pub struct MipModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Minimized.
    pub objective: Vec<(usize, Rational)>,
    pub metadata: ModelMetadata,
    index: HashMap<String, usize>,
}

impl PartialEq for MipModel {
    fn eq(&self, other: &Self) -> bool {
        self.variables == other.variables
            && self.constraints == other.constraints
            && self.objective == other.objective
            && self.metadata == other.metadata
    }
}

impl MipModel {
    pub fn new(metadata: ModelMetadata) -> Self {
        Self { variables: Vec::new(), constraints: Vec::new(), objective: Vec::new(), metadata, index: HashMap::new() }
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn key_index(&self, key: &VarKey) -> Option<usize> {
        self.variable_index(&key.name())
    }

    pub fn add_variable(&mut self, name: String, kind: VarKind, lower: Rational, upper: Option<Rational>) -> Result<usize, MipError> {
        if self.index.contains_key(&name) {
            return Err(MipError::Malformed(format!("variable {name} declared twice")));
        }
        let id = self.variables.len();
        self.index.insert(name.clone(), id);
        self.variables.push(Variable { name, kind, lower, upper });
        Ok(id)
    }

    pub(crate) fn add_unit(&mut self, key: VarKey, kind: VarKind) -> usize {
        self.add_variable(key.name(), kind, Rational::zero(), Some(Rational::one()))
            .expect("builders never repeat a key")
    }

    pub(crate) fn var(&self, key: VarKey) -> usize {
        self.key_index(&key).unwrap_or_else(|| panic!("variable {} not declared", key.name()))
    }

    /// Adds a constraint after merging repeated variables and, when some
    /// coefficient has no terminating decimal form, scaling to integers.
    pub fn add_constraint(&mut self, name: impl Into<String>, terms: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) {
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(terms.len());
        for (var, coef) in terms {
            match merged.iter_mut().find(|(v, _)| *v == var) {
                Some((_, c)) => *c += coef,
                None => merged.push((var, coef)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        let (terms, rhs) = normalize(merged, rhs);
        self.constraints.push(Constraint { name: name.into(), terms, sense, rhs });
    }

    pub fn family_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for c in &self.constraints {
            *counts.entry(c.family().to_string()).or_insert(0) += 1;
        }
        counts
    }

    /// Variables per name prefix (`x`, `u`, `y`, `f`).
    pub fn variable_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for v in &self.variables {
            let prefix = v.name.split('_').next().unwrap_or(&v.name);
            *counts.entry(prefix.to_string()).or_insert(0) += 1;
        }
        counts
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.name == name)
    }

    /// Every constraint and objective term refers to a declared variable.
    pub fn check_references(&self) -> Result<(), MipError> {
        let n = self.variables.len();
        for c in &self.constraints {
            if let Some((v, _)) = c.terms.iter().find(|(v, _)| *v >= n) {
                return Err(MipError::Malformed(format!("constraint {} uses undeclared variable #{v}", c.name)));
            }
        }
        if self.objective.iter().any(|(v, _)| *v >= n) {
            return Err(MipError::Malformed("objective uses an undeclared variable".into()));
        }
        Ok(())
    }

    pub(crate) fn rebuild_index(&mut self) {
        self.index = self.variables.iter().enumerate().map(|(i, v)| (v.name.clone(), i)).collect();
    }
}

fn normalize(terms: Vec<(usize, Rational)>, rhs: Rational) -> (Vec<(usize, Rational)>, Rational) {
    let all_terminate = terms.iter().map(|(_, c)| c).chain([&rhs]).all(|v| terminating_decimal(v).is_some());
    if all_terminate {
        return (terms, rhs);
    }
    let scale = terms.iter().map(|(_, c)| *c.denom()).chain([*rhs.denom()]).fold(1i128, |acc, d| acc.lcm(&d));
    let scale = Rational::from_integer(scale);
    (terms.into_iter().map(|(v, c)| (v, c * scale)).collect(), rhs * scale)
}

/// Short stable digest of node count and weighted edge list.
pub fn graph_fingerprint(g: &Graph) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("n={};", g.node_count()));
    for e in g.edges() {
        hasher.update(format!("{} {} {};", e.u, e.v, e.weight));
    }
    hasher.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}
