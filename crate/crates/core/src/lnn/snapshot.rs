use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{GraphSpec, LnnError, LnnGraph, NodeKind, TruthBounds};

/// Display classification of a node's bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Unknown,
    Contradiction,
}

impl Truth {
    pub fn classify(b: TruthBounds) -> Truth {
        if b.lower > b.upper {
            Truth::Contradiction
        } else if b.lower >= 0.5 && b.upper >= 0.5 {
            Truth::True
        } else if b.upper <= 0.5 && b.lower <= 0.5 {
            Truth::False
        } else {
            Truth::Unknown
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotNode {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
    pub lower: f64,
    pub upper: f64,
    pub beta: f64,
    pub asserted: bool,
    pub truth: Truth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEdge {
    pub parent: String,
    pub child: String,
    pub weight: f64,
}

/// Serializable view of a graph: nodes with bounds and truth class, weighted
/// edges, and the action ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub nodes: Vec<SnapshotNode>,
    pub edges: Vec<SnapshotEdge>,
    pub actions: Vec<String>,
}

impl LnnGraph {
    pub fn export_snapshot(&self) -> Snapshot {
        Snapshot {
            nodes: self
                .nodes()
                .iter()
                .map(|n| SnapshotNode {
                    id: n.id.clone(),
                    kind: n.kind,
                    label: n.label.clone(),
                    lower: n.bounds.lower,
                    upper: n.bounds.upper,
                    beta: n.beta,
                    asserted: n.asserted,
                    truth: Truth::classify(n.bounds),
                })
                .collect(),
            edges: self
                .edges()
                .iter()
                .map(|e| SnapshotEdge { parent: e.parent.clone(), child: e.child.clone(), weight: e.weight })
                .collect(),
            actions: self.actions().map(str::to_string).collect(),
        }
    }

    pub fn from_snapshot(snapshot: &Snapshot) -> Result<LnnGraph, LnnError> {
        let json = serde_json::to_value(snapshot).expect("snapshot serializes");
        let spec: GraphSpec = serde_json::from_value(json).expect("snapshot is a graph spec");
        LnnGraph::build(&spec)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Snapshot {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serializes")
    }

    /// GraphViz rendering, drawn left to right from propositions to gates.
    /// Nodes classified true are filled red, all others white.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lnn {\n  rankdir=LR;\n");
        for n in &self.nodes {
            let is_action = self.actions.contains(&n.id);
            let (shape, text) = match n.kind {
                NodeKind::Proposition if is_action => ("box", n.label.clone()),
                NodeKind::Proposition => ("box\", style=\"rounded,filled", n.label.clone()),
                NodeKind::And => ("circle", "∧".to_string()),
                NodeKind::Or => ("circle", "∨".to_string()),
                NodeKind::Not => ("circle", "¬".to_string()),
                NodeKind::Implies => ("circle", "→".to_string()),
            };
            let fill = if n.truth == Truth::True { "red" } else { "white" };
            let style = if shape.contains("style=") { "" } else { ", style=\"filled\"" };
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"{}\\n[{:.2}, {:.2}]\", shape=\"{}\"{}, fillcolor=\"{}\"];",
                escape(&n.id),
                escape(&text),
                n.lower,
                n.upper,
                shape,
                style,
                fill
            );
        }
        for e in &self.edges {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", escape(&e.child), escape(&e.parent), e.weight);
        }
        out.push_str("}\n");
        out
    }
}
