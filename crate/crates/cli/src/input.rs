use std::fs;
use std::path::Path;

use mecs_core::exact::ExactMethod;
use mecs_core::gadgets::GadgetError;
use mecs_core::io::{builtin_instance, load_labeled_edge_list, IoError, BUILTIN_NAMES};
use mecs_core::mip::MipError;
use mecs_core::{Graph, GraphError, SpannerError, TargetError};

use crate::{Failure, EXIT_PARSE, EXIT_RESOURCE, EXIT_SOLVER, EXIT_TARGET};

/// A graph with the label each node carried in its file.
pub struct Loaded {
    pub graph: Graph,
    pub labels: Vec<u64>,
}

/// Reads an edge-list file; `builtin:NAME`, or a bare builtin name with no
/// such file on disk, loads a bundled instance.
pub fn load_graph(source: &str) -> Result<Loaded, Failure> {
    let builtin = source
        .strip_prefix("builtin:")
        .or_else(|| (!Path::new(source).exists() && BUILTIN_NAMES.contains(&source)).then_some(source));
    if let Some(name) = builtin {
        let graph = builtin_instance(name).map_err(io_failure)?;
        let labels = (0..graph.node_count() as u64).collect();
        return Ok(Loaded { graph, labels });
    }
    let text = read_text(Path::new(source))?;
    let (graph, labels) = load_labeled_edge_list(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{source}: {e}")))?;
    Ok(Loaded { graph, labels })
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

pub fn io_failure(e: IoError) -> Failure {
    Failure::new(EXIT_PARSE, e.to_string())
}

pub fn gadget_failure(e: GadgetError) -> Failure {
    Failure::new(EXIT_PARSE, e.to_string())
}

pub fn target_failure(e: TargetError) -> Failure {
    let code = match e {
        TargetError::Infeasible { .. } | TargetError::DisconnectedInput => EXIT_TARGET,
        _ => EXIT_PARSE,
    };
    Failure::new(code, e.to_string())
}

pub fn graph_failure(e: GraphError) -> Failure {
    let code = if e == GraphError::Disconnected { EXIT_TARGET } else { EXIT_PARSE };
    Failure::new(code, e.to_string())
}

/// Exit code for a library error; incumbents are handled by the caller.
pub fn spanner_failure(e: &SpannerError) -> Failure {
    let code = match e {
        SpannerError::Target(t) => return target_failure(t.clone()),
        SpannerError::Graph(g) => return graph_failure(g.clone()),
        SpannerError::InvalidEdgeStretch => EXIT_PARSE,
        SpannerError::InfeasibleResult(_) => EXIT_TARGET,
        SpannerError::IncompleteSearch { .. } | SpannerError::TooLarge(_) => EXIT_RESOURCE,
    };
    Failure::new(code, e.to_string())
}

pub fn mip_failure(e: &MipError) -> Failure {
    let code = match e {
        MipError::Target(t) => return target_failure(t.clone()),
        MipError::Graph(g) => return graph_failure(g.clone()),
        MipError::Spanner(s) => return spanner_failure(s),
        MipError::Solver { .. }
        | MipError::Timeout { .. }
        | MipError::DisconnectedOptimum { .. }
        | MipError::Parse { .. }
        | MipError::MissingVariable(_)
        | MipError::NonBinary { .. } => EXIT_SOLVER,
        _ => EXIT_PARSE,
    };
    Failure::new(code, e.to_string())
}

pub fn method_tag(m: ExactMethod) -> &'static str {
    match m {
        ExactMethod::Enumerate => "enumerate",
        ExactMethod::BranchAndBound => "bnb",
    }
}
