//! Seeded instance generators. All randomness comes from ChaCha8 seeded with
//! `seed_from_u64`; a coordinate is `(next_u64 >> 11) * 2^-53 * box_size`.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{is_connected, Graph};

use super::IoError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitDiskParams {
    pub box_size: f64,
    pub point_count: usize,
    /// Edge iff distance < range (unweighted mode).
    pub range: f64,
    pub weighted: bool,
    /// Weight 1 below this distance (weighted mode).
    pub near_threshold: f64,
    /// Weight 2 below this distance, no edge beyond (weighted mode).
    pub far_threshold: f64,
    pub seed: u64,
    pub max_attempts: usize,
}

impl Default for UnitDiskParams {
    fn default() -> Self {
        Self {
            box_size: 100.0,
            point_count: 50,
            range: 20.0,
            weighted: false,
            near_threshold: 12.5,
            far_threshold: 25.0,
            seed: 0,
            max_attempts: 1000,
        }
    }
}

impl UnitDiskParams {
    /// The weighted variant: weights 1 and 2 at thresholds 12.5 and 25.
    pub fn weighted_default() -> Self {
        Self { weighted: true, range: 25.0, ..Self::default() }
    }

    fn validate(&self) -> Result<(), IoError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.box_size) || !positive(self.range) || self.point_count == 0 {
            return Err(IoError::InvalidParams("box size, range and point count must be positive".into()));
        }
        if self.weighted {
            if !positive(self.near_threshold) || self.near_threshold >= self.far_threshold {
                return Err(IoError::InvalidParams("need 0 < near threshold < far threshold".into()));
            }
            if self.range != self.far_threshold {
                return Err(IoError::InvalidParams(format!(
                    "weighted mode connects up to the far threshold; range {} must equal it ({})",
                    self.range, self.far_threshold
                )));
            }
        }
        if self.max_attempts == 0 {
            return Err(IoError::InvalidParams("max attempts must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitDiskInstance {
    pub graph: Graph,
    pub points: Vec<(f64, f64)>,
    /// 1-based attempt that produced a connected graph.
    pub attempts: usize,
}

pub fn generate_unit_disk(params: &UnitDiskParams) -> Result<UnitDiskInstance, IoError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for attempt in 1..=params.max_attempts {
        let points: Vec<(f64, f64)> = (0..params.point_count)
            .map(|_| (rng.gen::<f64>() * params.box_size, rng.gen::<f64>() * params.box_size))
            .collect();
        let graph = unit_disk_graph(&points, params)?;
        if is_connected(&graph) {
            return Ok(UnitDiskInstance { graph, points, attempts: attempt });
        }
    }
    Err(IoError::RetriesExhausted {
        attempts: params.max_attempts,
        hint: "no connected instance found; try a larger range or more points".into(),
    })
}

/// Edges for fixed coordinates under the unit-disk rule of `params`.
pub fn unit_disk_graph(points: &[(f64, f64)], params: &UnitDiskParams) -> Result<Graph, IoError> {
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = (points[i].0 - points[j].0).hypot(points[i].1 - points[j].1);
            let weight = if params.weighted {
                if d < params.near_threshold {
                    Some(1)
                } else if d < params.far_threshold {
                    Some(2)
                } else {
                    None
                }
            } else {
                (d < params.range).then_some(1)
            };
            if let Some(w) = weight {
                edges.push((i, j, w));
            }
        }
    }
    Ok(Graph::new(points.len(), edges)?)
}

/// `id x y` rows for a coordinate sidecar file.
pub fn save_coordinates(points: &[(f64, f64)]) -> String {
    let mut out = String::new();
    for (id, (x, y)) in points.iter().enumerate() {
        let _ = writeln!(out, "{id} {x} {y}");
    }
    out
}

pub fn load_coordinates(text: &str) -> Result<Vec<(f64, f64)>, IoError> {
    let mut points = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |message: String| IoError::Parse { line: index + 1, message };
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [id, x, y] = fields[..] else {
            return Err(bad(format!("expected `id x y`, got {content:?}")));
        };
        let id: usize = id.parse().map_err(|_| bad(format!("bad id {id:?}")))?;
        if id != points.len() {
            return Err(bad(format!("expected id {}, got {id}", points.len())));
        }
        let x: f64 = x.parse().map_err(|_| bad(format!("bad coordinate {x:?}")))?;
        let y: f64 = y.parse().map_err(|_| bad(format!("bad coordinate {y:?}")))?;
        points.push((x, y));
    }
    Ok(points)
}

/// Connected graph on `n` nodes with `m` edges: a random spanning tree
/// (random attachment over a shuffled order) plus uniformly chosen extra
/// pairs, weights uniform in `1..=max_weight`.
pub fn generate_random_connected(n: usize, m: usize, max_weight: u64, seed: u64) -> Result<Graph, IoError> {
    if n == 0 || max_weight == 0 {
        return Err(IoError::InvalidParams("need n >= 1 and max weight >= 1".into()));
    }
    let max_edges = n * (n - 1) / 2;
    if m + 1 < n || m > max_edges {
        return Err(IoError::InvalidParams(format!("edge count {m} outside {}..={max_edges}", n - 1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = vec![false; n * n];
    let mut edges = Vec::with_capacity(m);
    let mut push = |a: usize, b: usize, rng: &mut ChaCha8Rng, edges: &mut Vec<(usize, usize, u64)>| {
        present[a * n + b] = true;
        present[b * n + a] = true;
        edges.push((a, b, rng.gen_range(1..=max_weight)));
    };
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        push(order[i], parent, &mut rng, &mut edges);
    }
    let mut missing: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| !present[a * n + b]).collect();
    missing.shuffle(&mut rng);
    for &(a, b) in missing.iter().take(m + 1 - n) {
        edges.push((a, b, rng.gen_range(1..=max_weight)));
    }
    Ok(Graph::new(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_in_range() {
        let params = UnitDiskParams { point_count: 2, range: 150.0, ..Default::default() };
        let inst = generate_unit_disk(&params).unwrap();
        assert_eq!(inst.graph.edge_count(), 1);
        assert_eq!(inst.attempts, 1);
    }

    #[test]
    fn deterministic_per_seed() {
        let params = UnitDiskParams { seed: 7, ..Default::default() };
        let a = generate_unit_disk(&params).unwrap();
        let b = generate_unit_disk(&params).unwrap();
        assert_eq!(a, b);
        assert!(is_connected(&a.graph));
    }

    #[test]
    fn weighted_audit() {
        let inst = generate_unit_disk(&UnitDiskParams { seed: 3, ..UnitDiskParams::weighted_default() }).unwrap();
        for e in inst.graph.edges() {
            let (p, q) = (inst.points[e.u], inst.points[e.v]);
            let d = (p.0 - q.0).hypot(p.1 - q.1);
            assert_eq!(e.weight, if d < 12.5 { 1 } else { 2 });
            assert!(d < 25.0);
        }
    }

    #[test]
    fn exhausted_retries() {
        let params = UnitDiskParams { range: 1.0, max_attempts: 3, ..Default::default() };
        assert!(matches!(generate_unit_disk(&params), Err(IoError::RetriesExhausted { attempts: 3, .. })));
    }

    #[test]
    fn rejects_inconsistent_thresholds() {
        let params = UnitDiskParams { near_threshold: 30.0, ..UnitDiskParams::weighted_default() };
        assert!(generate_unit_disk(&params).is_err());
        let params = UnitDiskParams { range: 20.0, ..UnitDiskParams::weighted_default() };
        assert!(generate_unit_disk(&params).is_err());
    }

    #[test]
    fn coordinates_round_trip() {
        let pts = vec![(0.1, 2.0), (1.0 / 3.0, 99.75)];
        assert_eq!(load_coordinates(&save_coordinates(&pts)).unwrap(), pts);
    }

    #[test]
    fn random_connected_shape() {
        for seed in 0..20 {
            let g = generate_random_connected(9, 14, 5, seed).unwrap();
            assert_eq!((g.node_count(), g.edge_count()), (9, 14));
            assert!(is_connected(&g));
            assert!(g.edges().iter().all(|e| (1..=5).contains(&e.weight)));
        }
        assert!(generate_random_connected(4, 2, 1, 0).is_err());
        assert!(generate_random_connected(4, 7, 1, 0).is_err());
    }
}
