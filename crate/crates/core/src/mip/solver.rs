use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::exact::{exact_solve, exact_solve_capped, ExactSolveParams};
use crate::graph::{EdgeId, Graph};
use crate::rational::Rational;
use crate::target::SpannerTarget;

use super::lp::write_lp;
use super::model::{graph_fingerprint, Formulation, MipModel, VarKey};
use super::MipError;

/// Slack allowed on binary values and on constraint checks.
pub const SOLUTION_TOLERANCE: f64 = 1e-6;

/// Anything that returns an optimal edge selection for a model.
pub trait MipSolver {
    /// Selected edge ids of `g`, including edges the model fixed outside.
    fn solve(&mut self, g: &Graph, model: &MipModel) -> Result<Vec<EdgeId>, MipError>;
}

/// Runs an external command on an LP file and reads back `name value` lines.
///
/// `{model}` and `{solution}` in the template are replaced by quoted paths
/// inside a fresh temporary directory; the command runs under `sh -c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverAdapter {
    pub command_template: String,
    pub timeout: Option<Duration>,
}

impl SolverAdapter {
    pub fn new(command_template: impl Into<String>) -> Self {
        Self { command_template: command_template.into(), timeout: None }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = Some(timeout);
        self
    }

    /// Writes the model, runs the command and parses the solution file.
    pub fn run(&self, model: &MipModel) -> Result<HashMap<String, f64>, MipError> {
        let io = |context: String| move |source| MipError::Io { context, source };
        let dir = tempfile::tempdir().map_err(io("creating a temporary directory".into()))?;
        let model_path = dir.path().join("model.lp");
        let solution_path = dir.path().join("solution.txt");
        fs::write(&model_path, write_lp(model)).map_err(io(format!("writing {}", model_path.display())))?;
        let command = self
            .command_template
            .replace("{model}", &quote(&model_path))
            .replace("{solution}", &quote(&solution_path));
        let stdout = fs::File::create(dir.path().join("stdout.txt")).map_err(io("capturing stdout".into()))?;
        let stderr_path = dir.path().join("stderr.txt");
        let stderr = fs::File::create(&stderr_path).map_err(io("capturing stderr".into()))?;
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&command)
            .stdin(Stdio::null())
            .stdout(stdout)
            .stderr(stderr)
            .spawn()
            .map_err(io(format!("starting {command:?}")))?;
        let start = Instant::now();
        let status = loop {
            if let Some(status) = child.try_wait().map_err(io("waiting for the solver".into()))? {
                break status;
            }
            if let Some(limit) = self.timeout {
                if start.elapsed() >= limit {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(MipError::Timeout { seconds: limit.as_secs_f64(), incumbent: None });
                }
            }
            std::thread::sleep(Duration::from_millis(10));
        };
        if !status.success() {
            let err = fs::read_to_string(&stderr_path).unwrap_or_default();
            let tail: Vec<&str> = err.lines().rev().take(5).collect();
            let tail: Vec<&str> = tail.into_iter().rev().collect();
            return Err(MipError::Solver { message: format!("{status}: {}", tail.join(" | ")), incumbent: None });
        }
        let text = fs::read_to_string(&solution_path).map_err(|e| MipError::Solver {
            message: format!("no solution file: {e}"),
            incumbent: None,
        })?;
        parse_solution(&text)
    }
}

fn quote(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', r"'\''"))
}

impl MipSolver for SolverAdapter {
    fn solve(&mut self, g: &Graph, model: &MipModel) -> Result<Vec<EdgeId>, MipError> {
        let values = self.run(model)?;
        selected_edges(model, g, &values)
    }
}

/// `name value` per line; `#` starts a comment.
pub fn parse_solution(text: &str) -> Result<HashMap<String, f64>, MipError> {
    let mut values = HashMap::new();
    for (index, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |message: String| MipError::Parse { line: index + 1, message };
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [name, value] = fields[..] else {
            return Err(bad(format!("expected `name value`, got {content:?}")));
        };
        let value: f64 = value.parse().map_err(|_| bad(format!("bad value {value:?}")))?;
        if !value.is_finite() {
            return Err(bad(format!("non-finite value for {name}")));
        }
        values.insert(name.to_string(), value);
    }
    Ok(values)
}

/// Rounds every `x` of the model to 0/1 and maps them back to edge ids,
/// adding the model's fixed edges.
pub fn selected_edges(model: &MipModel, g: &Graph, values: &HashMap<String, f64>) -> Result<Vec<EdgeId>, MipError> {
    if model.metadata.fingerprint != graph_fingerprint(g) {
        return Err(MipError::Malformed("model was built from a different graph".into()));
    }
    let edge = |i: usize, j: usize| {
        g.find_edge(i, j).ok_or_else(|| MipError::Malformed(format!("model edge ({i}, {j}) is not in the graph")))
    };
    let mut ids = Vec::new();
    for v in &model.variables {
        let Some(VarKey::X { i, j }) = v.key() else {
            continue;
        };
        let value = *values.get(&v.name).ok_or_else(|| MipError::MissingVariable(v.name.clone()))?;
        if value.abs() <= SOLUTION_TOLERANCE {
            continue;
        }
        if (value - 1.0).abs() <= SOLUTION_TOLERANCE {
            ids.push(edge(i, j)?);
        } else {
            return Err(MipError::NonBinary { name: v.name.clone(), value });
        }
    }
    for &(u, v) in &model.metadata.fixed_edges {
        ids.push(edge(u, v)?);
    }
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}

/// In-process stand-in for an external solver. It minimizes edge count
/// over the semantics the model encodes: exact APL with connectivity for the
/// flow model, distances capped at `L + 1` for path models. Models with
/// leaf-fixed edges are refused.
#[derive(Debug, Clone, Default)]
pub struct InternalExactSolver {
    pub params: ExactSolveParams,
}

impl MipSolver for InternalExactSolver {
    fn solve(&mut self, g: &Graph, model: &MipModel) -> Result<Vec<EdgeId>, MipError> {
        let meta = &model.metadata;
        if meta.fingerprint != graph_fingerprint(g) {
            return Err(MipError::Malformed("model was built from a different graph".into()));
        }
        if !meta.fixed_edges.is_empty() {
            return Err(MipError::UnsupportedFormulation {
                formulation: "internal exact solver",
                requirement: "a model built without leaf reduction",
            });
        }
        let solver_error = |e: crate::spanner::SpannerError| MipError::Solver { message: e.to_string(), incumbent: None };
        match meta.formulation {
            Formulation::Flow => {
                let target = SpannerTarget::absolute(meta.bound)?;
                Ok(exact_solve(g, &target, &self.params).map_err(solver_error)?.result.selected_edges)
            }
            Formulation::Path | Formulation::WeightedPath => {
                let l = meta.length_limit.ok_or_else(|| MipError::Malformed("path model without L".into()))?;
                let n = g.node_count() as i128;
                let limit = meta.bound * Rational::from_integer(n * (n - 1) / 2);
                exact_solve_capped(g, limit, l as u64 + 1, &self.params).map_err(solver_error)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mip::{build_path_model, EnhancementSet};

    fn k3_model() -> (Graph, MipModel) {
        let g = Graph::complete(3);
        let m = build_path_model(&g, &SpannerTarget::Stretch(Rational::new(4, 3)), 2, &EnhancementSet::default()).unwrap();
        (g, m)
    }

    #[test]
    fn parse_and_round() {
        let (g, m) = k3_model();
        let vals = parse_solution("# comment\nx_0_1 1.0000004\nx_0_2 -0.0000003\nx_1_2 1\n\n").unwrap();
        assert_eq!(selected_edges(&m, &g, &vals).unwrap().len(), 2);
        let vals = parse_solution("x_0_1 0.5\nx_0_2 0\nx_1_2 1").unwrap();
        assert!(matches!(selected_edges(&m, &g, &vals), Err(MipError::NonBinary { .. })));
        let vals = parse_solution("x_0_1 1\nx_1_2 1").unwrap();
        assert!(matches!(selected_edges(&m, &g, &vals), Err(MipError::MissingVariable(_))));
        assert!(parse_solution("x_0_1").is_err());
        assert!(parse_solution("x_0_1 abc").is_err());
    }

    #[test]
    fn shell_adapter_round_trip() {
        let (g, m) = k3_model();
        let mut adapter = SolverAdapter::new("printf 'x_0_1 1\\nx_0_2 1\\nx_1_2 0\\n' > {solution}");
        assert_eq!(adapter.solve(&g, &m).unwrap(), vec![0, 1]);
    }

    #[test]
    fn adapter_failures() {
        let (g, m) = k3_model();
        let mut failing = SolverAdapter::new("echo boom >&2; exit 3");
        assert!(matches!(failing.solve(&g, &m), Err(MipError::Solver { message, .. }) if message.contains("boom")));
        let mut slow = SolverAdapter::new("sleep 5").with_timeout(Duration::from_millis(100));
        assert!(matches!(slow.solve(&g, &m), Err(MipError::Timeout { .. })));
        let mut silent = SolverAdapter::new("true");
        assert!(matches!(silent.solve(&g, &m), Err(MipError::Solver { .. })));
    }

    #[test]
    fn internal_solver_on_k3() {
        let (g, m) = k3_model();
        assert_eq!(InternalExactSolver::default().solve(&g, &m).unwrap().len(), 2);
    }
}
