//! Edge-list files, builtin benchmark graphs and seeded generators.

mod builtin;
mod edgelist;
mod generate;

use thiserror::Error;

use crate::gadgets::{EcstsGadget, SubsetSumGadget};
use crate::graph::GraphError;

pub use builtin::{builtin_instance, BUILTIN_NAMES};
pub use edgelist::{
    header_value, load_edge_list, load_labeled_edge_list, parse_rows, read_edge_list, read_header, save_edge_list,
    save_edge_selection, write_edge_list, EdgeRow,
};
pub use generate::{
    generate_random_connected, generate_unit_disk, load_coordinates, save_coordinates, unit_disk_graph,
    UnitDiskInstance, UnitDiskParams,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown instance {name:?} (known: {known})")]
    UnknownInstance { name: String, known: String },
    #[error("instance {name:?} is not available: {hint}")]
    Unsourced { name: String, hint: String },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("gave up after {attempts} attempts: {hint}")]
    RetriesExhausted { attempts: usize, hint: String },
}

/// Header lines recording a subset-sum gadget's parameters.
pub fn subset_sum_header(g: &SubsetSumGadget) -> Vec<String> {
    let values: Vec<String> = g.values.iter().map(u64::to_string).collect();
    vec![
        "gadget: subset-sum".into(),
        format!("values: {}", values.join(" ")),
        format!("b: {}", g.target),
        format!("r: {}", g.weight_budget),
        format!("C: {}", g.distance_budget),
    ]
}

/// Header lines recording a tree-spanner gadget's parameters; subsets are
/// written as comma-joined 0-based triples.
pub fn ecsts_header(g: &EcstsGadget) -> Vec<String> {
    let subsets: Vec<String> = g.subsets.iter().map(|s| format!("{},{},{}", s[0], s[1], s[2])).collect();
    vec![
        "gadget: ecsts".into(),
        format!("t: {}", g.t),
        format!("subsets: {}", subsets.join(" ")),
        format!("r: {}", g.pad_count),
        format!("C: {}", g.distance_budget),
    ]
}
