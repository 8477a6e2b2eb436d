//! LP text format. Model metadata rides along in `\ key: value` comment
//! lines so a written model reads back to an identical value.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_fraction, parse_rational, terminating_decimal, Rational};

use super::model::{Formulation, MipModel, ModelMetadata, Sense, VarKind, Variable};
use super::MipError;

const WRAP: usize = 120;

fn number(v: &Rational) -> String {
    terminating_decimal(v).unwrap_or_else(|| format_fraction(v))
}

fn write_expr(out: &mut String, head: &str, terms: &[(usize, Rational)], model: &MipModel) {
    let mut line = head.to_string();
    for (k, (var, coef)) in terms.iter().enumerate() {
        let name = &model.variables[*var].name;
        let sign = if coef.is_negative() { "-" } else { "+" };
        let mag = coef.abs();
        let body = if mag.is_one() { name.clone() } else { format!("{} {name}", number(&mag)) };
        let piece = if k == 0 && sign == "+" { body } else { format!("{sign} {body}") };
        if line.len() + piece.len() + 1 > WRAP && line.len() > head.len() {
            out.push_str(&line);
            out.push('\n');
            line = String::from("   ");
        } else if !line.ends_with(' ') {
            line.push(' ');
        }
        line.push_str(&piece);
    }
    out.push_str(&line);
}

pub fn write_lp(model: &MipModel) -> String {
    let meta = &model.metadata;
    let mut out = String::new();
    let _ = writeln!(out, "\\ formulation: {}", meta.formulation);
    if let Some(l) = meta.length_limit {
        let _ = writeln!(out, "\\ L: {l}");
    }
    let _ = writeln!(out, "\\ fingerprint: {}", meta.fingerprint);
    let _ = writeln!(out, "\\ bound: {}", format_fraction(&meta.bound));
    for (u, v) in &meta.fixed_edges {
        let _ = writeln!(out, "\\ fixed: {u} {v}");
    }
    for w in &meta.warnings {
        let _ = writeln!(out, "\\ warning: {w}");
    }
    out.push_str("Minimize\n");
    write_expr(&mut out, " obj:", &model.objective, model);
    out.push('\n');
    out.push_str("Subject To\n");
    for c in &model.constraints {
        write_expr(&mut out, &format!(" {}:", c.name), &c.terms, model);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), number(&c.rhs));
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        match &v.upper {
            Some(up) => {
                let _ = writeln!(out, " {} <= {} <= {}", number(&v.lower), v.name, number(up));
            }
            None => {
                let _ = writeln!(out, " {} >= {}", v.name, number(&v.lower));
            }
        }
    }
    let binaries: Vec<&str> =
        model.variables.iter().filter(|v| v.kind == VarKind::Binary).map(|v| v.name.as_str()).collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for chunk in binaries.chunks(8) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

pub fn save_lp(model: &MipModel, path: &Path) -> Result<(), MipError> {
    std::fs::write(path, write_lp(model))
        .map_err(|source| MipError::Io { context: format!("writing {}", path.display()), source })
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Done,
}

/// One logical statement and the line it started on.
struct Statement {
    line: usize,
    text: String,
}

pub fn read_lp(text: &str) -> Result<MipModel, MipError> {
    let mut meta_lines: Vec<(usize, String, String)> = Vec::new();
    let mut section = Section::Preamble;
    let mut objective: Vec<Statement> = Vec::new();
    let mut constraints: Vec<Statement> = Vec::new();
    let mut bounds: Vec<Statement> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('\\') {
            if let Some((k, v)) = comment.split_once(':') {
                meta_lines.push((line, k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let next = match trimmed.to_ascii_lowercase().as_str() {
            "minimize" => Some(Section::Objective),
            "subject to" => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "binaries" => Some(Section::Binaries),
            "end" => Some(Section::Done),
            _ => None,
        };
        if let Some(next) = next {
            section = next;
            continue;
        }
        let continuation = trimmed.starts_with('+') || trimmed.starts_with('-');
        let target = match section {
            Section::Objective => &mut objective,
            Section::Constraints => &mut constraints,
            Section::Bounds => &mut bounds,
            Section::Binaries => {
                binaries.extend(trimmed.split_whitespace().map(str::to_string));
                continue;
            }
            Section::Preamble | Section::Done => {
                return Err(MipError::Parse { line, message: format!("unexpected text {trimmed:?}") });
            }
        };
        match (continuation, target.last_mut()) {
            (true, Some(last)) if section != Section::Bounds => {
                last.text.push(' ');
                last.text.push_str(trimmed);
            }
            _ => target.push(Statement { line, text: trimmed.to_string() }),
        }
    }
    if section != Section::Done {
        return Err(MipError::Parse { line: text.lines().count(), message: "missing End".into() });
    }

    let metadata = parse_metadata(&meta_lines)?;
    let mut model = MipModel::new(metadata);
    let binary: HashSet<&str> = binaries.iter().map(String::as_str).collect();
    for st in &bounds {
        let v = parse_bound(st, &binary)?;
        model.add_variable(v.name, v.kind, v.lower, v.upper).map_err(|e| MipError::Parse { line: st.line, message: e.to_string() })?;
    }
    if let Some(missing) = binaries.iter().find(|b| model.variable_index(b).is_none()) {
        return Err(MipError::Parse { line: 0, message: format!("binary {missing} has no bounds entry") });
    }
    if objective.len() > 1 {
        return Err(MipError::Parse { line: objective[1].line, message: "more than one objective".into() });
    }
    if let Some(st) = objective.first() {
        let (name, rest) = split_name(st)?;
        if name != "obj" {
            return Err(MipError::Parse { line: st.line, message: format!("objective must be named obj, got {name}") });
        }
        model.objective = parse_terms(rest, st.line, &model)?;
    }
    for st in &constraints {
        let (name, rest) = split_name(st)?;
        let (lhs, sense, rhs) = ["<=", ">=", "="]
            .iter()
            .find_map(|op| rest.rsplit_once(op).map(|(l, r)| (l, *op, r)))
            .ok_or_else(|| MipError::Parse { line: st.line, message: "constraint has no sense".into() })?;
        let sense = match sense {
            "<=" => Sense::Le,
            ">=" => Sense::Ge,
            _ => Sense::Eq,
        };
        let rhs = parse_rational(rhs).map_err(|e| MipError::Parse { line: st.line, message: e.to_string() })?;
        let terms = parse_terms(lhs, st.line, &model)?;
        // stored as written; no merging or rescaling on the way back in
        model.constraints.push(super::model::Constraint { name: name.to_string(), terms, sense, rhs });
    }
    model.rebuild_index();
    Ok(model)
}

fn split_name(st: &Statement) -> Result<(&str, &str), MipError> {
    st.text
        .split_once(':')
        .map(|(n, r)| (n.trim(), r))
        .ok_or_else(|| MipError::Parse { line: st.line, message: "expected `name: expression`".into() })
}

fn parse_terms(text: &str, line: usize, model: &MipModel) -> Result<Vec<(usize, Rational)>, MipError> {
    let bad = |message: String| MipError::Parse { line, message };
    let mut terms = Vec::new();
    let mut sign = Rational::one();
    let mut coef: Option<Rational> = None;
    for tok in text.split_whitespace() {
        match tok {
            "+" => sign = Rational::one(),
            "-" => sign = -Rational::one(),
            _ if tok.starts_with(|c: char| c.is_ascii_digit() || c == '.') => {
                coef = Some(parse_rational(tok).map_err(|e| bad(e.to_string()))?);
            }
            _ => {
                let var = model.variable_index(tok).ok_or_else(|| bad(format!("undeclared variable {tok}")))?;
                terms.push((var, sign * coef.take().unwrap_or_else(Rational::one)));
                sign = Rational::one();
            }
        }
    }
    if coef.is_some() {
        return Err(bad("dangling coefficient".into()));
    }
    Ok(terms)
}

fn parse_bound(st: &Statement, binary: &HashSet<&str>) -> Result<Variable, MipError> {
    let bad = |message: &str| MipError::Parse { line: st.line, message: message.to_string() };
    let num = |s: &str| parse_rational(s).map_err(|e| MipError::Parse { line: st.line, message: e.to_string() });
    let toks: Vec<&str> = st.text.split_whitespace().collect();
    let (name, lower, upper) = match toks[..] {
        [lo, "<=", name, "<=", up] => (name, num(lo)?, Some(num(up)?)),
        [name, ">=", lo] => (name, num(lo)?, None),
        _ => return Err(bad("expected `lo <= name <= up` or `name >= lo`")),
    };
    let kind = if binary.contains(name) { VarKind::Binary } else { VarKind::Continuous };
    Ok(Variable { name: name.to_string(), kind, lower, upper })
}

fn parse_metadata(lines: &[(usize, String, String)]) -> Result<ModelMetadata, MipError> {
    let mut formulation = None;
    let mut length_limit = None;
    let mut fingerprint = String::new();
    let mut bound = Rational::zero();
    let mut fixed_edges = Vec::new();
    let mut warnings = Vec::new();
    for (line, key, value) in lines {
        let bad = |message: String| MipError::Parse { line: *line, message };
        match key.as_str() {
            "formulation" => {
                formulation =
                    Some(Formulation::from_tag(value).ok_or_else(|| bad(format!("unknown formulation {value:?}")))?)
            }
            "L" => length_limit = Some(value.parse().map_err(|_| bad(format!("bad L {value:?}")))?),
            "fingerprint" => fingerprint = value.clone(),
            "bound" => bound = parse_rational(value).map_err(|e| bad(e.to_string()))?,
            "fixed" => {
                let ends: Vec<usize> =
                    value.split_whitespace().map(|t| t.parse().map_err(|_| bad(format!("bad edge {value:?}")))).collect::<Result<_, _>>()?;
                let [u, v] = ends[..] else {
                    return Err(bad(format!("bad edge {value:?}")));
                };
                fixed_edges.push((u, v));
            }
            "warning" => warnings.push(value.clone()),
            _ => {}
        }
    }
    let formulation = formulation.ok_or(MipError::Parse { line: 0, message: "missing formulation comment".into() })?;
    Ok(ModelMetadata { formulation, length_limit, fingerprint, bound, fixed_edges, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::mip::{build_flow_model, build_path_model, EnhancementSet};
    use crate::target::SpannerTarget;

    #[test]
    fn objective_only_document() {
        let meta = ModelMetadata {
            formulation: Formulation::Path,
            length_limit: Some(1),
            fingerprint: "00".into(),
            bound: Rational::new(7, 3),
            fixed_edges: vec![(0, 1)],
            warnings: vec!["note: kept".into()],
        };
        let mut m = MipModel::new(meta);
        let x = m.add_unit(super::super::VarKey::X { i: 0, j: 1 }, VarKind::Binary);
        m.objective.push((x, Rational::one()));
        let text = write_lp(&m);
        assert!(text.contains("Subject To\nBounds\n"));
        assert_eq!(read_lp(&text).unwrap(), m);
    }

    #[test]
    fn flow_and_path_round_trip() {
        let g = Graph::complete(3);
        let t = SpannerTarget::Stretch(Rational::new(4, 3));
        let flow = build_flow_model(&g, &t, &EnhancementSet::default()).unwrap();
        assert_eq!(read_lp(&write_lp(&flow)).unwrap(), flow);
        let g = Graph::path(6);
        let path = build_path_model(&g, &SpannerTarget::Stretch(Rational::new(11, 10)), 5, &EnhancementSet::default())
            .unwrap();
        let text = write_lp(&path);
        assert!(text.lines().all(|l| l.len() <= WRAP + 40));
        assert_eq!(read_lp(&text).unwrap(), path);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_lp("Minimize\n obj: x\nEnd\n").is_err());
        assert!(read_lp("\\ formulation: flow\nMinimize\n obj:\nSubject To\n c: x_0_1 >= 1\nEnd\n").is_err());
        assert!(read_lp("\\ formulation: flow\nMinimize\n obj:\n").is_err());
    }
}
