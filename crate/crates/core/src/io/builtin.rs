use crate::graph::Graph;

use super::IoError;

/// Zachary's karate club, 1-based adjacency rows (each edge listed once).
const KARATE: &[(usize, &[usize])] = &[
    (1, &[2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 18, 20, 22, 32]),
    (2, &[3, 4, 8, 14, 18, 20, 22, 31]),
    (3, &[4, 8, 9, 10, 14, 28, 29, 33]),
    (4, &[8, 13, 14]),
    (5, &[7, 11]),
    (6, &[7, 11, 17]),
    (7, &[17]),
    (9, &[31, 33, 34]),
    (10, &[34]),
    (14, &[34]),
    (15, &[33, 34]),
    (16, &[33, 34]),
    (19, &[33, 34]),
    (20, &[34]),
    (21, &[33, 34]),
    (23, &[33, 34]),
    (24, &[26, 28, 30, 33, 34]),
    (25, &[26, 28, 32]),
    (26, &[32]),
    (27, &[30, 34]),
    (28, &[34]),
    (29, &[32, 34]),
    (30, &[33, 34]),
    (31, &[33, 34]),
    (32, &[33, 34]),
    (33, &[34]),
];

pub const BUILTIN_NAMES: &[&str] = &["karate", "krebs"];

/// Named benchmark graphs. Node `i` of the karate club is member `i + 1`.
pub fn builtin_instance(name: &str) -> Result<Graph, IoError> {
    match name {
        "karate" => {
            let edges = KARATE.iter().flat_map(|&(u, vs)| vs.iter().map(move |&v| (u - 1, v - 1)));
            Ok(Graph::unweighted(34, edges)?)
        }
        "krebs" => Err(IoError::Unsourced {
            name: name.into(),
            hint: "no vetted edge list is bundled; load one with an edge-list file".into(),
        }),
        _ => Err(IoError::UnknownInstance { name: name.into(), known: BUILTIN_NAMES.join(", ") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apl, minimum_spanning_tree};

    #[test]
    fn karate_shape() {
        let g = builtin_instance("karate").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (34, 78));
        assert_eq!(g.degree(0), 16);
        assert_eq!(g.degree(33), 17);
        assert_eq!(minimum_spanning_tree(&g).unwrap().len(), 33);
        assert_eq!(apl(&g).unwrap().distance_sum, 1351);
    }

    #[test]
    fn unknown_and_unsourced() {
        assert!(matches!(builtin_instance("krebs"), Err(IoError::Unsourced { .. })));
        assert!(matches!(builtin_instance("zoo"), Err(IoError::UnknownInstance { .. })));
    }
}
