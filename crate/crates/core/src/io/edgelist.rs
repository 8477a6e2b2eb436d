//! Plain-text edge lists: one `u v` or `u v w` row per edge, `#` comments.
//!
//! A `# nodes: N` header pins the node count and keeps ids as written;
//! without it ids are compacted to `0..n` in order of first appearance.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::graph::{EdgeId, Graph, NodeId};

use super::IoError;

/// One data row as written in the file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRow {
    pub line: usize,
    pub u: u64,
    pub v: u64,
    pub weight: Option<u64>,
}

/// `# key: value` comment lines, in file order.
pub fn read_header(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .filter_map(|l| l.split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

pub fn header_value<'a>(header: &'a [(String, String)], key: &str) -> Option<&'a str> {
    header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

/// Data rows without any id remapping.
pub fn parse_rows(text: &str) -> Result<Vec<EdgeRow>, IoError> {
    let mut rows = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(IoError::Parse { line, message: format!("expected `u v` or `u v w`, got {content:?}") });
        }
        let number = |s: &str, what: &str| {
            s.parse::<u64>()
                .map_err(|_| IoError::Parse { line, message: format!("{what} {s:?} is not a non-negative integer") })
        };
        let u = number(fields[0], "node id")?;
        let v = number(fields[1], "node id")?;
        let weight = fields.get(2).map(|w| number(w, "weight")).transpose()?;
        if weight == Some(0) {
            return Err(IoError::Parse { line, message: "weight must be positive".into() });
        }
        rows.push(EdgeRow { line, u, v, weight });
    }
    Ok(rows)
}

pub fn load_edge_list(text: &str) -> Result<Graph, IoError> {
    load_labeled_edge_list(text).map(|(g, _)| g)
}

/// Like [`load_edge_list`], also returning the file label of every node.
/// With a `nodes` header the labels are `0..n`; otherwise nodes are numbered
/// by first appearance.
pub fn load_labeled_edge_list(text: &str) -> Result<(Graph, Vec<u64>), IoError> {
    let header = read_header(text);
    let declared = header_value(&header, "nodes")
        .map(|v| {
            v.parse::<usize>()
                .map_err(|_| IoError::Parse { line: 0, message: format!("bad node count {v:?}") })
        })
        .transpose()?;
    let rows = parse_rows(text)?;

    let mut ids: HashMap<u64, NodeId> = HashMap::new();
    let mut node_of = |raw: u64, line: usize| -> Result<NodeId, IoError> {
        match declared {
            Some(n) => {
                if raw >= n as u64 {
                    return Err(IoError::Parse { line, message: format!("node {raw} outside declared 0..{n}") });
                }
                Ok(raw as NodeId)
            }
            None => {
                let next = ids.len();
                Ok(*ids.entry(raw).or_insert(next))
            }
        }
    };
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(rows.len());
    for row in &rows {
        if row.u == row.v {
            return Err(IoError::Parse { line: row.line, message: format!("self-loop on node {}", row.u) });
        }
        let (a, b) = (node_of(row.u, row.line)?, node_of(row.v, row.line)?);
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(IoError::Parse {
                line: row.line,
                message: format!("duplicate edge {} {}", row.u, row.v),
            });
        }
        edges.push((a, b, row.weight.unwrap_or(1)));
    }
    let n = declared.unwrap_or(ids.len());
    let labels = match declared {
        Some(n) => (0..n as u64).collect(),
        None => {
            let mut labels = vec![0; n];
            for (raw, id) in ids {
                labels[id] = raw;
            }
            labels
        }
    };
    Ok((Graph::new(n, edges)?, labels))
}

pub fn read_edge_list(path: &Path) -> Result<Graph, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::Io { path: path.display().to_string(), source: e })?;
    load_edge_list(&text)
}

/// Serializes with optional extra header lines (written as `# line`). The
/// node count is always recorded, and weights are omitted on unit graphs.
pub fn save_edge_list(g: &Graph, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "# nodes: {}", g.node_count());
    let mut rows: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
    rows.sort_unstable();
    let unit = g.is_unit_weight();
    for (u, v, w) in rows {
        if unit {
            let _ = writeln!(out, "{u} {v}");
        } else {
            let _ = writeln!(out, "{u} {v} {w}");
        }
    }
    out
}

/// Writes the selected edges of `g` using the given node labels. The node
/// count header is only emitted when the labels are `0..n`.
pub fn save_edge_selection(g: &Graph, labels: &[u64], ids: &[EdgeId], header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    if labels.iter().enumerate().all(|(i, &l)| l == i as u64) {
        let _ = writeln!(out, "# nodes: {}", g.node_count());
    }
    let unit = g.is_unit_weight();
    let mut rows: Vec<_> = ids
        .iter()
        .map(|&id| {
            let e = g.edge(id);
            let (a, b) = (labels[e.u], labels[e.v]);
            (a.min(b), a.max(b), e.weight)
        })
        .collect();
    rows.sort_unstable();
    for (u, v, w) in rows {
        if unit {
            let _ = writeln!(out, "{u} {v}");
        } else {
            let _ = writeln!(out, "{u} {v} {w}");
        }
    }
    out
}

pub fn write_edge_list(path: &Path, g: &Graph, header: &[String]) -> Result<(), IoError> {
    std::fs::write(path, save_edge_list(g, header)).map_err(|e| IoError::Io { path: path.display().to_string(), source: e })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_weighted_path() {
        let g = load_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g, Graph::path(3));
        let g = load_edge_list("0 1 3\n# note\n1 2 4").unwrap();
        assert_eq!(g.weight_between(1, 2), Some(4));
        assert!(!g.is_unit_weight());
    }

    #[test]
    fn compaction_follows_first_appearance() {
        let g = load_edge_list("10 7\n7 3\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert!(g.find_edge(0, 1).is_some() && g.find_edge(1, 2).is_some());
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(load_edge_list("0 0"), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(load_edge_list("0 1\n# x\n1 0"), Err(IoError::Parse { line: 3, .. })));
        assert!(matches!(load_edge_list("0 1\n1 x"), Err(IoError::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list("0 1 0"), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(load_edge_list("# nodes: 2\n0 2"), Err(IoError::Parse { line: 2, .. })));
    }

    #[test]
    fn round_trip_keeps_isolated_nodes() {
        let g = Graph::new(5, [(3, 1, 2), (0, 1, 7)]).unwrap();
        let text = save_edge_list(&g, &["gadget: demo".into()]);
        assert!(text.starts_with("# gadget: demo\n# nodes: 5\n"));
        assert_eq!(load_edge_list(&text).unwrap(), g);
        let empty = Graph::new(4, []).unwrap();
        assert_eq!(load_edge_list(&save_edge_list(&empty, &[])).unwrap().node_count(), 4);
    }

    #[test]
    fn header_lookup() {
        let h = read_header("# values: 1 2\n# r: 8\n0 1\n");
        assert_eq!(header_value(&h, "r"), Some("8"));
        assert_eq!(header_value(&h, "values"), Some("1 2"));
        assert_eq!(header_value(&h, "C"), None);
    }
}
