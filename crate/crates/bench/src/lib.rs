//! Graphs shared by the benchmarks.

use mecs_core::io::{builtin_instance, generate_unit_disk, UnitDiskParams};
use mecs_core::Graph;

pub fn karate() -> Graph {
    builtin_instance("karate").expect("bundled instance")
}

/// Connected unit-disk graph with `n` points in a box scaled so the
/// expected degree stays near eight.
pub fn unit_disk(n: usize, weighted: bool, seed: u64) -> Graph {
    let base = if weighted { UnitDiskParams::weighted_default() } else { UnitDiskParams::default() };
    let box_size = base.range * (n as f64 * std::f64::consts::PI / 8.0).sqrt();
    let params = UnitDiskParams { point_count: n, box_size, seed, ..base };
    generate_unit_disk(&params).expect("dense enough to connect").graph
}
