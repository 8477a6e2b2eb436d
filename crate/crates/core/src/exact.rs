//! Exact minimum spanners for small graphs: cardinality-ordered subset
//! enumeration and an include-first branch-and-bound.
//!
//! Both methods break ties the same way: smallest objective, then fewest
//! edges, then the lexicographically smallest sorted id vector.

use std::time::{Duration, Instant};

use itertools::Itertools;
use serde::Serialize;

use crate::graph::{all_pairs_distances_masked, bridges, DisjointSet, EdgeId, Graph};
use crate::rational::Rational;
use crate::spanner::{Algorithm, SpannerError, SpannerResult};
use crate::target::SpannerTarget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactMethod {
    Enumerate,
    BranchAndBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    EdgeCount,
    EdgeWeight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSolveParams {
    pub method: ExactMethod,
    pub objective: Objective,
    /// Largest `|E_s| - (n - 1)` the search may look at.
    pub max_edges_over_tree: Option<usize>,
    /// Search nodes (branch-and-bound) or subsets (enumeration) allowed.
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
}

impl Default for ExactSolveParams {
    fn default() -> Self {
        Self {
            method: ExactMethod::BranchAndBound,
            objective: Objective::EdgeCount,
            max_edges_over_tree: None,
            node_limit: 20_000_000,
            time_limit: None,
        }
    }
}

impl ExactSolveParams {
    pub fn with_method(method: ExactMethod) -> Self {
        Self { method, ..Self::default() }
    }
}

/// Evidence that the returned subgraph is optimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptimalityCertificate {
    pub method: ExactMethod,
    pub objective: Objective,
    pub optimum: u64,
    /// Subsets (enumeration) or search nodes (branch-and-bound) examined.
    pub explored: u64,
    /// Bridges fixed before the search.
    pub forced_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSolution {
    pub result: SpannerResult,
    pub certificate: OptimalityCertificate,
}

/// Minimizes edge count or weight subject to the APL target.
pub fn exact_solve(
    g: &Graph,
    target: &SpannerTarget,
    params: &ExactSolveParams,
) -> Result<ExactSolution, SpannerError> {
    let resolved = target.resolve_for(g)?;
    let criterion = Criterion {
        limit: resolved.distance_sum_limit(g.node_count()),
        cap: None,
        weight_cap: None,
    };
    let algorithm = match params.method {
        ExactMethod::Enumerate => Algorithm::ExactEnumerate,
        ExactMethod::BranchAndBound => Algorithm::ExactBranchAndBound,
    };
    let outcome = run(g, &criterion, params)?;
    let wrap = |ids: Vec<EdgeId>| SpannerResult::from_selection(g, ids, resolved, algorithm);
    if !outcome.complete {
        return Err(SpannerError::IncompleteSearch {
            reason: outcome.stop_reason.unwrap_or_else(|| "edge cap reached".into()),
            incumbent: outcome.best.map(|b| Box::new(wrap(b.ids))),
        });
    }
    let best = outcome.best.expect("the full edge set meets any resolvable target");
    let result = wrap(best.ids);
    debug_assert!(result.is_feasible());
    Ok(ExactSolution {
        certificate: OptimalityCertificate {
            method: params.method,
            objective: params.objective,
            optimum: best.key.0,
            explored: outcome.explored,
            forced_edges: outcome.forced,
        },
        result,
    })
}

/// Minimum edge count with every distance capped at `cap` (unreachable pairs
/// count as `cap`) and the capped unordered sum at most `limit`. Connectivity
/// is not required. Returns the selected ids.
pub fn exact_solve_capped(
    g: &Graph,
    limit: Rational,
    cap: u64,
    params: &ExactSolveParams,
) -> Result<Vec<EdgeId>, SpannerError> {
    let criterion = Criterion { limit, cap: Some(cap), weight_cap: None };
    let outcome = run(g, &criterion, params)?;
    if !outcome.complete {
        return Err(SpannerError::IncompleteSearch {
            reason: outcome.stop_reason.unwrap_or_else(|| "edge cap reached".into()),
            incumbent: None,
        });
    }
    outcome
        .best
        .map(|b| b.ids)
        .ok_or_else(|| SpannerError::TooLarge("capped distance budget unreachable even with every edge".into()))
}

/// Answer to the two-budget decision problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityWitness {
    pub feasible: bool,
    /// A minimum-weight witness when feasible.
    pub witness: Option<Vec<EdgeId>>,
    pub weight: Option<u64>,
    pub distance_sum: Option<u64>,
}

/// Is there a connected spanning subgraph with total weight at most
/// `weight_budget` and unordered-pair distance sum at most `distance_budget`?
pub fn exact_feasibility(
    g: &Graph,
    weight_budget: u64,
    distance_budget: u64,
    node_limit: u64,
) -> Result<FeasibilityWitness, SpannerError> {
    let none = FeasibilityWitness { feasible: false, witness: None, weight: None, distance_sum: None };
    if g.node_count() < 2 {
        return Ok(FeasibilityWitness { feasible: true, witness: Some(Vec::new()), weight: Some(0), distance_sum: Some(0) });
    }
    if !crate::graph::is_connected(g) {
        return Ok(none);
    }
    let criterion = Criterion {
        limit: Rational::from_integer(distance_budget as i128),
        cap: None,
        weight_cap: Some(weight_budget),
    };
    let params = ExactSolveParams {
        method: ExactMethod::BranchAndBound,
        objective: Objective::EdgeWeight,
        node_limit,
        ..ExactSolveParams::default()
    };
    let outcome = run(g, &criterion, &params)?;
    if !outcome.complete {
        return Err(SpannerError::TooLarge(outcome.stop_reason.unwrap_or_default()));
    }
    let Some(best) = outcome.best else {
        return Ok(none);
    };
    let mask = g.mask_of(&best.ids)?;
    let sum = all_pairs_distances_masked(g, Some(&mask)).unordered_sum();
    // re-check the witness independently of the search bookkeeping
    assert!(sum.is_some_and(|s| s <= distance_budget) && g.weight_of(&best.ids) <= weight_budget);
    Ok(FeasibilityWitness {
        feasible: true,
        weight: Some(g.weight_of(&best.ids)),
        distance_sum: sum,
        witness: Some(best.ids),
    })
}

struct Criterion {
    /// Bound on the unordered distance sum.
    limit: Rational,
    /// Distance cap; `None` demands connectivity and exact distances.
    cap: Option<u64>,
    weight_cap: Option<u64>,
}

impl Criterion {
    fn needs_connectivity(&self) -> bool {
        self.cap.is_none()
    }

    /// Distance sum of the masked subgraph within the limit.
    fn distances_ok(&self, g: &Graph, mask: &[bool]) -> bool {
        let dist = all_pairs_distances_masked(g, Some(mask));
        let sum = match self.cap {
            Some(cap) => dist.capped_unordered_sum(cap),
            None => match dist.unordered_sum() {
                Some(s) => s,
                None => return false,
            },
        };
        Rational::from_integer(sum as i128) <= self.limit
    }
}

#[derive(Debug, Clone)]
struct Best {
    key: (u64, u64),
    ids: Vec<EdgeId>,
}

struct Outcome {
    best: Option<Best>,
    complete: bool,
    explored: u64,
    forced: usize,
    stop_reason: Option<String>,
}

fn key_of(g: &Graph, objective: Objective, ids: &[EdgeId]) -> (u64, u64) {
    let card = ids.len() as u64;
    match objective {
        Objective::EdgeCount => (card, card),
        Objective::EdgeWeight => (g.weight_of(ids), card),
    }
}

fn run(g: &Graph, criterion: &Criterion, params: &ExactSolveParams) -> Result<Outcome, SpannerError> {
    let forced: Vec<EdgeId> = if criterion.needs_connectivity() { bridges(g) } else { Vec::new() };
    let free: Vec<EdgeId> = (0..g.edge_count()).filter(|id| forced.binary_search(id).is_err()).collect();
    let max_card = params
        .max_edges_over_tree
        .map_or(g.edge_count(), |extra| (g.node_count() - 1 + extra).min(g.edge_count()));
    match params.method {
        ExactMethod::Enumerate => enumerate(g, criterion, params, &forced, &free, max_card),
        ExactMethod::BranchAndBound => {
            let mut search = BranchAndBound {
                g,
                criterion,
                objective: params.objective,
                free: &free,
                max_card,
                node_limit: params.node_limit,
                deadline: params.time_limit.map(|d| Instant::now() + d),
                included: forced.clone(),
                best: None,
                explored: 0,
                cap_hit: false,
                stop_reason: None,
            };
            search.visit(0);
            let complete = search.stop_reason.is_none() && !search.cap_hit;
            Ok(Outcome {
                best: search.best,
                complete,
                explored: search.explored,
                forced: forced.len(),
                stop_reason: search.stop_reason,
            })
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

fn enumerate(
    g: &Graph,
    criterion: &Criterion,
    params: &ExactSolveParams,
    forced: &[EdgeId],
    free: &[EdgeId],
    max_card: usize,
) -> Result<Outcome, SpannerError> {
    let min_card = if criterion.needs_connectivity() { g.node_count() - 1 } else { 0 };
    let min_card = min_card.max(forced.len());
    let total: u128 = (min_card..=max_card.max(min_card))
        .map(|k| binomial(free.len(), k.saturating_sub(forced.len())))
        .sum();
    if total > params.node_limit as u128 {
        return Err(SpannerError::TooLarge(format!(
            "{total} subsets to enumerate exceed the limit of {}",
            params.node_limit
        )));
    }
    let deadline = params.time_limit.map(|d| Instant::now() + d);
    let forced_weight = g.weight_of(forced);
    let mut best: Option<Best> = None;
    let mut explored = 0u64;
    let mut exhausted = true;
    'cards: for k in min_card..=max_card {
        let extra = k - forced.len();
        if extra > free.len() {
            break;
        }
        if let Some(b) = &best {
            // free ids ascend in weight, so the first `extra` are the lightest
            let lightest = forced_weight + g.weight_of(&free[..extra]);
            let lb = key_of_parts(params.objective, k as u64, lightest);
            if lb >= b.key {
                break;
            }
        }
        for combo in free.iter().copied().combinations(extra) {
            explored += 1;
            if explored.is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() > d) {
                return Ok(Outcome {
                    best,
                    complete: false,
                    explored,
                    forced: forced.len(),
                    stop_reason: Some("time limit reached".into()),
                });
            }
            let mut ids: Vec<EdgeId> = forced.iter().copied().chain(combo).collect();
            ids.sort_unstable();
            let key = key_of(g, params.objective, &ids);
            if best.as_ref().is_some_and(|b| key >= b.key) {
                continue;
            }
            if criterion.weight_cap.is_some_and(|cap| g.weight_of(&ids) > cap) {
                continue;
            }
            let mask = g.mask_of(&ids)?;
            if criterion.distances_ok(g, &mask) {
                best = Some(Best { key, ids });
                if params.objective == Objective::EdgeCount {
                    break 'cards;
                }
            }
        }
        if k == max_card && max_card < g.edge_count() {
            exhausted = false;
        }
    }
    // Hitting the edge cap only matters when a larger subset could still win.
    let complete = exhausted || {
        let k = max_card + 1;
        let extra = k - forced.len();
        best.as_ref().is_some_and(|b| {
            extra > free.len()
                || key_of_parts(params.objective, k as u64, forced_weight + g.weight_of(&free[..extra])) >= b.key
        })
    };
    Ok(Outcome {
        best,
        complete,
        explored,
        forced: forced.len(),
        stop_reason: (!complete).then(|| "edge cap reached".into()),
    })
}

fn key_of_parts(objective: Objective, card: u64, weight: u64) -> (u64, u64) {
    match objective {
        Objective::EdgeCount => (card, card),
        Objective::EdgeWeight => (weight, card),
    }
}

struct BranchAndBound<'a> {
    g: &'a Graph,
    criterion: &'a Criterion,
    objective: Objective,
    free: &'a [EdgeId],
    max_card: usize,
    node_limit: u64,
    deadline: Option<Instant>,
    included: Vec<EdgeId>,
    best: Option<Best>,
    explored: u64,
    cap_hit: bool,
    stop_reason: Option<String>,
}

impl BranchAndBound<'_> {
    /// Decides `free[depth..]` given the current `included` set.
    fn visit(&mut self, depth: usize) {
        if self.stop_reason.is_some() {
            return;
        }
        self.explored += 1;
        if self.explored > self.node_limit {
            self.stop_reason = Some(format!("node limit of {} reached", self.node_limit));
            return;
        }
        if self.explored.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() > d) {
            self.stop_reason = Some("time limit reached".into());
            return;
        }
        let g = self.g;
        let rest = &self.free[depth..];

        // Lower bound: joining k components needs k - 1 more edges.
        let mut sets = DisjointSet::new(g.node_count());
        let mut components = g.node_count();
        for &id in &self.included {
            if sets.union(g.edge(id).u, g.edge(id).v) {
                components -= 1;
            }
        }
        let missing = if self.criterion.needs_connectivity() { components - 1 } else { 0 };
        let card_lb = (self.included.len() + missing) as u64;
        let weight = g.weight_of(&self.included);
        if self.criterion.weight_cap.is_some_and(|cap| weight > cap) {
            return;
        }
        let min_rest = rest.iter().map(|&id| g.edge(id).weight).min().unwrap_or(0);
        let lb = key_of_parts(self.objective, card_lb, weight + missing as u64 * min_rest);
        if self.best.as_ref().is_some_and(|b| lb >= b.key) {
            return;
        }
        if self.included.len() > self.max_card || card_lb as usize > self.max_card {
            self.cap_hit = true;
            return;
        }

        // Everything still undecided is the most this subtree can use.
        let mut upper = vec![false; g.edge_count()];
        for &id in self.included.iter().chain(rest) {
            upper[id] = true;
        }
        if self.criterion.needs_connectivity() && !crate::graph::is_connected_masked(g, &upper) {
            return;
        }
        if !self.criterion.distances_ok(g, &upper) {
            return;
        }

        let mut current = vec![false; g.edge_count()];
        for &id in &self.included {
            current[id] = true;
        }
        let connected_enough = !self.criterion.needs_connectivity() || components == 1;
        if connected_enough && self.criterion.distances_ok(g, &current) {
            let mut ids = self.included.clone();
            ids.sort_unstable();
            let key = key_of(g, self.objective, &ids);
            if self.best.as_ref().is_none_or(|b| key < b.key) {
                self.best = Some(Best { key, ids });
            }
            return;
        }
        if rest.is_empty() {
            return;
        }
        self.included.push(self.free[depth]);
        self.visit(depth + 1);
        self.included.pop();
        self.visit(depth + 1);
    }
}
