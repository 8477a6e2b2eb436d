//! Line-oriented `key: value` reports with an optional one-object JSON form.

use mecs_core::rational::{format_fraction, to_f64};
use mecs_core::{apl, diameter, verify_feasibility, AplValue, Distance, EdgeId, Graph, Rational, SpannerTarget};
use serde_json::Value;

/// Bumped whenever a key is renamed or removed.
pub const REPORT_VERSION: u64 = 1;

#[derive(Debug, Clone)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self { entries: Vec::new() };
        r.set("report_version", REPORT_VERSION);
        r.set("command", command);
        r
    }

    /// Sets a key, replacing an earlier value in place.
    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        let value = value.into();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
        out
    }

    pub fn render_json(&self) -> String {
        let fields: Vec<String> = self
            .entries
            .iter()
            .map(|(k, v)| format!("{}:{}", Value::String(k.clone()), v))
            .collect();
        format!("{{{}}}\n", fields.join(","))
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.render_json()
        } else {
            self.render_text()
        }
    }

    /// `input_*` keys describing the loaded graph.
    pub fn describe_input(&mut self, g: &Graph) {
        self.set("input_nodes", g.node_count());
        self.set("input_edges", g.edge_count());
        self.set("input_weight", g.total_weight());
        let value = apl(g).ok();
        self.set_apl("input_apl", value.as_ref());
        self.set("input_diameter", distance_text(diameter(g)));
    }

    pub fn describe_target(&mut self, target: &SpannerTarget, bound: Option<Rational>) {
        self.set("target_mode", target.mode());
        self.set("target_parameter", format_fraction(&target.parameter()));
        if let Some(b) = bound {
            self.set("target_bound", format_fraction(&b));
            self.set("target_bound_decimal", decimal(&b));
        }
    }

    /// `result_*` keys; the feasibility flags come from a fresh check of
    /// `ids` against `target`, so they agree with `verify` on the same set.
    pub fn describe_result(&mut self, g: &Graph, ids: &[EdgeId], target: &SpannerTarget) -> bool {
        let check = verify_feasibility(g, ids, target);
        self.set("result_edges", check.edge_count);
        self.set("result_weight", check.total_weight);
        self.set_apl("result_apl", check.achieved_apl.as_ref());
        self.set("result_connected", check.connected);
        self.set("feasible", check.feasible);
        self.set("contains_mst_weight_tree", check.contains_mst_weight_tree);
        check.feasible
    }

    /// `<prefix>` as an exact fraction and `<prefix>_decimal`; disconnected
    /// graphs read `infinite`.
    pub fn set_apl(&mut self, prefix: &str, value: Option<&AplValue>) {
        match value.and_then(AplValue::value) {
            Some(v) => {
                self.set(prefix, format_fraction(&v));
                self.set(&format!("{prefix}_decimal"), decimal(&v));
            }
            None => {
                self.set(prefix, "infinite");
                self.set(&format!("{prefix}_decimal"), "inf");
            }
        }
    }
}

pub fn decimal(value: &Rational) -> String {
    format!("{:.6}", to_f64(value))
}

pub fn distance_text(d: Distance) -> Value {
    match d {
        Distance::Finite(x) => Value::from(x),
        Distance::Infinite => Value::from("infinite"),
    }
}

/// Graphviz rendering of a selection, using file labels for node names.
pub fn to_dot(g: &Graph, labels: &[u64], ids: &[EdgeId]) -> String {
    let mut out = String::from("graph spanner {\n");
    for label in labels {
        out.push_str(&format!("  {label};\n"));
    }
    let unit = g.is_unit_weight();
    for &id in ids {
        let e = g.edge(id);
        if unit {
            out.push_str(&format!("  {} -- {};\n", labels[e.u], labels[e.v]));
        } else {
            out.push_str(&format!("  {} -- {} [weight={w}, label=\"{w}\"];\n", labels[e.u], labels[e.v], w = e.weight));
        }
    }
    out.push_str("}\n");
    out
}
