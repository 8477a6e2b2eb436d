use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::time::{Duration, Instant};

use mecs_core::exact::ExactMethod;
use mecs_core::gadgets::{build_ecsts_gadget, build_subset_sum_gadget};
use mecs_core::io::{
    ecsts_header, generate_random_connected, generate_unit_disk, parse_rows, save_coordinates, save_edge_list,
    save_edge_selection, subset_sum_header, UnitDiskParams,
};
use mecs_core::mip::{
    build_flow_model, build_path_model, build_weighted_path_model, iterative_exact, write_lp, EnhancementSet,
    InternalExactSolver, MipError, MipSolver, SolverAdapter,
};
use mecs_core::rational::format_fraction;
use mecs_core::{
    diameter, exact_solve, greedy_addition, greedy_addition_optimized, greedy_removal, greedy_spanner, verify_feasibility,
    EdgeId, ExactSolveParams, Graph, GraphError, Objective, SpannerError, SpannerResult, SpannerTarget,
};

use crate::input::{
    gadget_failure, graph_failure, io_failure, load_graph, method_tag, mip_failure, read_text, spanner_failure,
    target_failure, write_text, Loaded,
};
use crate::report::{distance_text, to_dot, Report};
use crate::{
    Algo, EnhancementArgs, Failure, FormulationArg, GenKind, Method, Output, OutputArgs, TargetArgs, EXIT_INFEASIBLE,
    EXIT_OK, EXIT_PARSE, EXIT_TARGET,
};

pub fn apl(graph: &str) -> Result<Output, Failure> {
    let Loaded { graph: g, .. } = load_graph(graph)?;
    let value = mecs_core::apl(&g).map_err(graph_failure)?;
    let mut r = Report::new("apl");
    r.set("nodes", g.node_count());
    r.set("edges", g.edge_count());
    r.set("weight", g.total_weight());
    r.set("connected", value.is_finite);
    r.set_apl("apl", Some(&value));
    r.set("diameter", distance_text(diameter(&g)));
    Ok(Output::Report(r, EXIT_OK))
}

pub fn sparsify(
    graph: &str,
    algo: Algo,
    target: &TargetArgs,
    edge_stretch: Option<mecs_core::Rational>,
    output: &OutputArgs,
) -> Result<Output, Failure> {
    let start = Instant::now();
    let loaded = load_graph(graph)?;
    let g = &loaded.graph;
    let target = target.target().map_err(target_failure)?;
    let resolved = target.resolve_for(g).map_err(target_failure)?;
    let mut r = Report::new("sparsify");
    r.describe_input(g);
    let result = match algo {
        Algo::GreedySpanner => {
            r.set("algorithm", "greedy-spanner");
            r.describe_target(&target, Some(resolved.bound));
            r.set("spanner_stretch", format_fraction(&resolved.stretch()));
            greedy_spanner(g, resolved.stretch())
        }
        Algo::Removal => {
            r.set("algorithm", "removal");
            r.describe_target(&target, Some(resolved.bound));
            greedy_removal(g, &target)
        }
        Algo::Addition => {
            r.set("algorithm", "addition");
            r.describe_target(&target, Some(resolved.bound));
            greedy_addition(g, &target)
        }
        Algo::AdditionOpt => {
            r.set("algorithm", "addition-opt");
            r.describe_target(&target, Some(resolved.bound));
            let t = edge_stretch.unwrap_or_else(|| resolved.stretch());
            r.set("edge_stretch", format_fraction(&t));
            greedy_addition_optimized(g, &target, Some(t))
        }
    };
    let result = result.map_err(|e| spanner_failure(&e).with_report(r.clone()))?;
    let feasible = finish(&mut r, &loaded, graph, &result.selected_edges, &target, output, start)?;
    Ok(Output::Report(r, if feasible { EXIT_OK } else { EXIT_TARGET }))
}

#[allow(clippy::too_many_arguments)]
pub fn exact(
    graph: &str,
    method: Method,
    target: &TargetArgs,
    max_extra: Option<usize>,
    by_weight: bool,
    node_limit: u64,
    time_limit: Option<f64>,
    output: &OutputArgs,
) -> Result<Output, Failure> {
    let start = Instant::now();
    let loaded = load_graph(graph)?;
    let g = &loaded.graph;
    let target = target.target().map_err(target_failure)?;
    let resolved = target.resolve_for(g).map_err(target_failure)?;
    let params = ExactSolveParams {
        method: match method {
            Method::Enumerate => ExactMethod::Enumerate,
            Method::Bnb => ExactMethod::BranchAndBound,
        },
        objective: if by_weight { Objective::EdgeWeight } else { Objective::EdgeCount },
        max_edges_over_tree: max_extra,
        node_limit,
        time_limit: seconds(time_limit)?,
    };
    let mut r = Report::new("exact");
    r.describe_input(g);
    r.set("algorithm", format!("exact-{}", method_tag(params.method)));
    r.describe_target(&target, Some(resolved.bound));
    r.set("objective", if by_weight { "weight" } else { "edges" });
    r.set("max_extra", max_extra.map_or("none".to_string(), |e| e.to_string()));
    r.set("node_limit", node_limit);
    match exact_solve(g, &target, &params) {
        Ok(solution) => {
            let c = &solution.certificate;
            r.set("status", "optimal");
            r.set("certificate_optimum", c.optimum);
            r.set("certificate_explored", c.explored);
            r.set("certificate_forced_edges", c.forced_edges);
            let feasible = finish(&mut r, &loaded, graph, &solution.result.selected_edges, &target, output, start)?;
            Ok(Output::Report(r, if feasible { EXIT_OK } else { EXIT_TARGET }))
        }
        Err(e) => {
            let failure = spanner_failure(&e);
            if let SpannerError::IncompleteSearch { incumbent, .. } = &e {
                r.set("status", "incomplete");
                report_incumbent(&mut r, &loaded, graph, incumbent.as_deref(), &target, output, start)?;
            }
            Err(failure.with_report(r))
        }
    }
}

pub fn export_mip(
    graph: &str,
    formulation: FormulationArg,
    length_limit: &str,
    enhancements: &EnhancementArgs,
    leaf_reduction: bool,
    target: &TargetArgs,
    out: &Path,
) -> Result<Output, Failure> {
    let Loaded { graph: g, .. } = load_graph(graph)?;
    let target = target.target().map_err(target_failure)?;
    if !g.is_unit_weight() && formulation != FormulationArg::PathWeighted {
        return Err(Failure::new(
            EXIT_PARSE,
            "graph has non-unit weights; use --formulation path-weighted",
        ));
    }
    let l = if length_limit == "auto" {
        diameter(&g).finite().ok_or_else(|| graph_failure(GraphError::Disconnected))? as usize
    } else if formulation == FormulationArg::Flow {
        return Err(Failure::new(EXIT_PARSE, "the flow formulation takes no --L"));
    } else {
        length_limit
            .parse()
            .map_err(|_| Failure::new(EXIT_PARSE, format!("--L expects a number or `auto`, got {length_limit:?}")))?
    };
    let mut enh = enhancements.to_set();
    enh.leaf_reduction = leaf_reduction;
    let model = match formulation {
        FormulationArg::Flow => build_flow_model(&g, &target, &enh),
        FormulationArg::Path => build_path_model(&g, &target, l, &enh),
        FormulationArg::PathWeighted => build_weighted_path_model(&g, &target, l, &enh),
    }
    .map_err(|e| mip_failure(&e))?;
    write_text(out, &write_lp(&model))?;

    let meta = &model.metadata;
    let mut r = Report::new("export-mip");
    r.describe_input(&g);
    r.set("formulation", meta.formulation.tag());
    r.set("length_limit", meta.length_limit.map_or("none".to_string(), |l| l.to_string()));
    r.set("fingerprint", meta.fingerprint.clone());
    r.set("bound", format_fraction(&meta.bound));
    r.set("variables_total", model.variables.len());
    for (prefix, count) in model.variable_counts() {
        r.set(&format!("variables_{prefix}"), count);
    }
    r.set("constraints_total", model.constraints.len());
    for (family, count) in model.family_counts() {
        r.set(&format!("constraints_{family}"), count);
    }
    r.set("fixed_edges", meta.fixed_edges.len());
    r.set("warnings", meta.warnings.join("; "));
    r.set("model", out.display().to_string());
    let sidecar = format!("{}.meta", out.display());
    write_text(Path::new(&sidecar), &r.render_text())?;
    r.set("metadata", sidecar);
    Ok(Output::Report(r, EXIT_OK))
}

pub fn solve_mip(
    graph: &str,
    solver_cmd: &str,
    target: &TargetArgs,
    enhancements: &EnhancementArgs,
    timeout: Option<f64>,
    node_limit: u64,
    output: &OutputArgs,
) -> Result<Output, Failure> {
    let start = Instant::now();
    let loaded = load_graph(graph)?;
    let g = &loaded.graph;
    let target = target.target().map_err(target_failure)?;
    let resolved = target.resolve_for(g).map_err(target_failure)?;
    let mut r = Report::new("solve-mip");
    r.describe_input(g);
    r.set("algorithm", "iterative-mip");
    r.describe_target(&target, Some(resolved.bound));
    r.set("solver", solver_cmd);
    let mut internal;
    let mut adapter;
    let solver: &mut dyn MipSolver = if solver_cmd == "internal:exact" {
        internal = InternalExactSolver::default();
        internal.params.node_limit = node_limit;
        internal.params.time_limit = seconds(timeout)?;
        &mut internal
    } else {
        adapter = SolverAdapter::new(solver_cmd);
        adapter.timeout = seconds(timeout)?;
        &mut adapter
    };
    match iterative_exact(g, &target, solver, &enhancements.to_set()) {
        Ok(outcome) => {
            let join = |f: &dyn Fn(&mecs_core::mip::IterationRecord) -> String| {
                outcome.iterations.iter().map(f).collect::<Vec<_>>().join(",")
            };
            r.set("status", "optimal");
            r.set("iterations", outcome.iterations.len());
            r.set("iteration_limits", join(&|i| i.length_limit.to_string()));
            r.set("iteration_edges", join(&|i| i.edge_count.to_string()));
            r.set("final_length_limit", outcome.final_length_limit);
            let feasible = finish(&mut r, &loaded, graph, &outcome.result.selected_edges, &target, output, start)?;
            Ok(Output::Report(r, if feasible { EXIT_OK } else { EXIT_TARGET }))
        }
        Err(e) => {
            let failure = mip_failure(&e);
            let (status, incumbent) = match &e {
                MipError::Solver { incumbent, .. } => ("solver-failure", incumbent.as_deref()),
                MipError::Timeout { incumbent, .. } => ("timeout", incumbent.as_deref()),
                MipError::DisconnectedOptimum { incumbent, .. } => ("disconnected-optimum", incumbent.as_deref()),
                MipError::Spanner(SpannerError::InfeasibleResult(res)) => ("infeasible-result", Some(&**res)),
                _ => ("error", None),
            };
            r.set("status", status);
            report_incumbent(&mut r, &loaded, graph, incumbent, &target, output, start)?;
            Err(failure.with_report(r))
        }
    }
}

pub fn generate(kind: GenKind) -> Result<Output, Failure> {
    let (graph, header, out, coords) = match kind {
        GenKind::UnitDisk { n, box_size, range, seed, weighted, near, far, max_attempts, coords, out } => {
            let params = UnitDiskParams {
                box_size,
                point_count: n,
                range: range.unwrap_or(if weighted { far } else { 20.0 }),
                weighted,
                near_threshold: near,
                far_threshold: far,
                seed,
                max_attempts,
            };
            let inst = generate_unit_disk(&params).map_err(io_failure)?;
            let mut header = vec![
                "generator: unit-disk".to_string(),
                format!("points: {n}"),
                format!("box: {box_size}"),
                format!("range: {}", params.range),
                format!("weighted: {weighted}"),
            ];
            if weighted {
                header.push(format!("thresholds: {near} {far}"));
            }
            header.push(format!("seed: {seed}"));
            header.push(format!("attempts: {}", inst.attempts));
            let coords = coords.map(|path| (path, save_coordinates(&inst.points)));
            (inst.graph, header, out, coords)
        }
        GenKind::Random { n, m, max_weight, seed, out } => {
            let g = generate_random_connected(n, m, max_weight, seed).map_err(io_failure)?;
            let header = vec![
                "generator: random-connected".to_string(),
                format!("max_weight: {max_weight}"),
                format!("seed: {seed}"),
            ];
            (g, header, out, None)
        }
        GenKind::GadgetSubsetSum { values, target, out } => {
            let gadget = build_subset_sum_gadget(&values, target).map_err(gadget_failure)?;
            let header = subset_sum_header(&gadget);
            (gadget.graph, header, out, None)
        }
        GenKind::GadgetEcsts { t, subsets, r, distance_budget, out } => {
            let triples = parse_triples(&subsets)?;
            let gadget = build_ecsts_gadget(t, &triples, r.zip(distance_budget)).map_err(gadget_failure)?;
            let header = ecsts_header(&gadget);
            (gadget.graph, header, out, None)
        }
    };
    let text = save_edge_list(&graph, &header);
    if let Some((path, points)) = &coords {
        write_text(path, points)?;
    }
    let Some(out) = out else {
        return Ok(Output::Text(text));
    };
    write_text(&out, &text)?;
    let mut r = Report::new("gen");
    for line in &header {
        if let Some((k, v)) = line.split_once(": ") {
            r.set(k, v);
        }
    }
    r.set("nodes", graph.node_count());
    r.set("edges", graph.edge_count());
    r.set("weight", graph.total_weight());
    r.set("out", out.display().to_string());
    Ok(Output::Report(r, EXIT_OK))
}

pub fn verify(against: &str, target: &TargetArgs, spanner: &Path) -> Result<Output, Failure> {
    let loaded = load_graph(against)?;
    let g = &loaded.graph;
    let target = target.target().map_err(target_failure)?;
    let node_of: HashMap<u64, usize> = loaded.labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let text = read_text(spanner)?;
    let rows = parse_rows(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", spanner.display())))?;
    let mut ids = Vec::with_capacity(rows.len());
    let mut seen = HashSet::new();
    for row in rows {
        let reject = |what: String| Failure::new(EXIT_PARSE, format!("{} line {}: {what}", spanner.display(), row.line));
        let (Some(&a), Some(&b)) = (node_of.get(&row.u), node_of.get(&row.v)) else {
            return Err(reject(format!("edge {} {} is not in the original graph", row.u, row.v)));
        };
        let id = g
            .find_edge(a, b)
            .ok_or_else(|| reject(format!("edge {} {} is not in the original graph", row.u, row.v)))?;
        if let Some(w) = row.weight {
            if w != g.edge(id).weight {
                return Err(reject(format!("weight {w} differs from the original {}", g.edge(id).weight)));
            }
        }
        if !seen.insert(id) {
            return Err(reject(format!("edge {} {} is listed twice", row.u, row.v)));
        }
        ids.push(id);
    }
    let check = verify_feasibility(g, &ids, &target);
    let mut r = Report::new("verify");
    r.describe_input(g);
    r.describe_target(&target, check.bound);
    r.set("subset_valid", check.subset_valid);
    r.set("spans_all_nodes", check.spans_all_nodes);
    let feasible = r.describe_result(g, &ids, &target);
    Ok(Output::Report(r, if feasible { EXIT_OK } else { EXIT_INFEASIBLE }))
}

impl EnhancementArgs {
    fn to_set(&self) -> EnhancementSet {
        EnhancementSet {
            relax_path_integrality: self.relax_paths,
            isolated_node_cuts: self.iso_cuts,
            connectivity_lb_cut: self.conn_cut,
            ..EnhancementSet::default()
        }
    }
}

fn seconds(value: Option<f64>) -> Result<Option<Duration>, Failure> {
    value
        .map(|s| {
            Duration::try_from_secs_f64(s).map_err(|_| Failure::new(EXIT_PARSE, format!("invalid duration {s}")))
        })
        .transpose()
}

/// `a,b,c` triples of 1-based elements, separated by `;` or given one per flag.
fn parse_triples(args: &[String]) -> Result<Vec<[usize; 3]>, Failure> {
    let mut triples = Vec::new();
    for part in args.iter().flat_map(|a| a.split(';')).map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || Failure::new(EXIT_PARSE, format!("subset {part:?} must be three 1-based elements like 1,2,3"));
        let elems: Vec<usize> = part
            .split(',')
            .map(|x| x.trim().parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        triples.push(<[usize; 3]>::try_from(elems).map_err(|_| bad())?);
    }
    Ok(triples)
}

/// Result keys, output files and wall time for a finished selection.
fn finish(
    r: &mut Report,
    loaded: &Loaded,
    source: &str,
    ids: &[EdgeId],
    target: &SpannerTarget,
    output: &OutputArgs,
    start: Instant,
) -> Result<bool, Failure> {
    let feasible = r.describe_result(&loaded.graph, ids, target);
    write_selection(r, loaded, source, ids, target, output)?;
    r.set("wall_time_ms", (start.elapsed().as_secs_f64() * 1e3 * 1e3).round() / 1e3);
    Ok(feasible)
}

fn report_incumbent(
    r: &mut Report,
    loaded: &Loaded,
    source: &str,
    incumbent: Option<&SpannerResult>,
    target: &SpannerTarget,
    output: &OutputArgs,
    start: Instant,
) -> Result<(), Failure> {
    r.set("incumbent", incumbent.is_some());
    if let Some(inc) = incumbent {
        finish(r, loaded, source, &inc.selected_edges, target, output, start)?;
    } else {
        r.set("wall_time_ms", (start.elapsed().as_secs_f64() * 1e3 * 1e3).round() / 1e3);
    }
    Ok(())
}

fn write_selection(
    r: &Report,
    loaded: &Loaded,
    source: &str,
    ids: &[EdgeId],
    target: &SpannerTarget,
    output: &OutputArgs,
) -> Result<(), Failure> {
    let g: &Graph = &loaded.graph;
    if let Some(path) = &output.out {
        let algorithm = r.get("algorithm").and_then(|v| v.as_str()).unwrap_or("unknown");
        let header = vec![
            format!("spanner-of: {source}"),
            format!("algorithm: {algorithm}"),
            format!("target: {} {}", target.mode(), format_fraction(&target.parameter())),
        ];
        write_text(path, &save_edge_selection(g, &loaded.labels, ids, &header))?;
    }
    if let Some(path) = &output.out_dot {
        write_text(path, &to_dot(g, &loaded.labels, ids))?;
    }
    Ok(())
}
