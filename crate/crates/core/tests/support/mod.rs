//! Brute-force reference computations. Nothing here calls into the library's
//! path, tree or search code; graphs are read only through their edge lists.

#![allow(dead_code)]

use mecs_core::{Graph, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: u64 = u64::MAX;

/// Floyd-Warshall over the edges whose ids pass `keep`.
pub fn floyd(g: &Graph, keep: impl Fn(usize) -> bool) -> Vec<Vec<u64>> {
    let n = g.node_count();
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (id, e) in g.edges().iter().enumerate() {
        if keep(id) {
            d[e.u][e.v] = d[e.u][e.v].min(e.weight);
            d[e.v][e.u] = d[e.v][e.u].min(e.weight);
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == INF {
                continue;
            }
            for j in 0..n {
                if d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub fn full_floyd(g: &Graph) -> Vec<Vec<u64>> {
    floyd(g, |_| true)
}

/// Unordered-pair sum, `None` when some pair is unreachable.
pub fn pair_sum(d: &[Vec<u64>]) -> Option<u64> {
    let mut s = 0;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[i][j] == INF {
                return None;
            }
            s += d[i][j];
        }
    }
    Some(s)
}

pub fn capped_pair_sum(d: &[Vec<u64>], cap: u64) -> u64 {
    let mut s = 0;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            s += d[i][j].min(cap);
        }
    }
    s
}

pub fn max_finite(d: &[Vec<u64>]) -> Option<u64> {
    let mut m = 0;
    for row in d {
        for &x in row {
            if x == INF {
                return None;
            }
            m = m.max(x);
        }
    }
    Some(m)
}

pub fn apl_oracle(g: &Graph) -> Option<Rational> {
    let n = g.node_count() as i128;
    pair_sum(&full_floyd(g)).map(|s| Rational::new(s as i128, n * (n - 1) / 2))
}

/// Smallest number of edges whose spanning subgraph is connected with
/// unordered distance sum at most `limit`, by trying every subset.
pub fn brute_min_edges(g: &Graph, limit: Rational) -> Option<usize> {
    let m = g.edge_count();
    assert!(m <= 20, "brute force is for tiny graphs");
    let mut best: Option<usize> = None;
    for mask in 0u32..(1 << m) {
        let size = mask.count_ones() as usize;
        if size + 1 < g.node_count() || best.is_some_and(|b| size >= b) {
            continue;
        }
        let d = floyd(g, |id| mask >> id & 1 == 1);
        if let Some(s) = pair_sum(&d) {
            if Rational::from_integer(s as i128) <= limit {
                best = Some(size);
            }
        }
    }
    best
}

/// Prim's algorithm on a dense matrix: `(tree edge count, tree weight)`.
pub fn prim(g: &Graph) -> (usize, u64) {
    let n = g.node_count();
    let mut w = vec![vec![INF; n]; n];
    for e in g.edges() {
        w[e.u][e.v] = e.weight;
        w[e.v][e.u] = e.weight;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![INF; n];
    best[0] = 0;
    let (mut edges, mut total) = (0, 0);
    for step in 0..n {
        let v = (0..n).filter(|&v| !in_tree[v] && best[v] != INF).min_by_key(|&v| best[v]).expect("connected");
        in_tree[v] = true;
        if step > 0 {
            edges += 1;
            total += best[v];
        }
        for u in 0..n {
            if !in_tree[u] && w[v][u] < best[u] {
                best[u] = w[v][u];
            }
        }
    }
    (edges, total)
}

pub fn is_connected_oracle(g: &Graph) -> bool {
    pair_sum(&full_floyd(g)).is_some()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected graph with `n` nodes and `m` edges: random tree plus extras.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, m: usize, max_w: u64) -> Graph {
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for v in 1..n {
        let u = rng.gen_range(0..v);
        present[u][v] = true;
        edges.push((u, v, rng.gen_range(1..=max_w)));
    }
    let mut missing: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| !present[a][b]).collect();
    while edges.len() < m && !missing.is_empty() {
        let (a, b) = missing.swap_remove(rng.gen_range(0..missing.len()));
        edges.push((a, b, rng.gen_range(1..=max_w)));
    }
    Graph::new(n, edges).expect("valid construction")
}

/// All connected graphs on `n` nodes up to isomorphism (n <= 6).
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let chosen: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        let g = Graph::unweighted(n, chosen.iter().copied()).expect("simple");
        if !is_connected_oracle(&g) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut key: Vec<(usize, usize)> =
                    chosen.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
                key.sort_unstable();
                key
            })
            .min()
            .expect("at least one permutation");
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn subset_sum_brute(values: &[u64], target: u64) -> bool {
    (0u32..(1 << values.len())).any(|mask| {
        values.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).sum::<u64>() == target
    })
}
