use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{LnnError, NodeKind, TruthBounds};

fn default_one() -> f64 {
    1.0
}

/// Declarative node description. Missing bounds default to `[1, 1]` for
/// asserted nodes and `[0, 1]` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: String,
    pub kind: NodeKind,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub asserted: bool,
    #[serde(default)]
    pub lower: Option<f64>,
    #[serde(default)]
    pub upper: Option<f64>,
}

impl NodeSpec {
    pub fn new(id: impl Into<String>, kind: NodeKind) -> Self {
        NodeSpec { id: id.into(), kind, label: None, beta: None, asserted: false, lower: None, upper: None }
    }

    pub fn proposition(id: impl Into<String>) -> Self {
        NodeSpec::new(id, NodeKind::Proposition)
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Marks the node asserted at the given bounds.
    pub fn asserted(mut self, bounds: TruthBounds) -> Self {
        self.asserted = true;
        self.lower = Some(bounds.lower);
        self.upper = Some(bounds.upper);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub parent: String,
    pub child: String,
    #[serde(default = "default_one")]
    pub weight: f64,
}

impl EdgeSpec {
    pub fn new(parent: impl Into<String>, child: impl Into<String>, weight: f64) -> Self {
        EdgeSpec { parent: parent.into(), child: child.into(), weight }
    }
}

/// Input to [`LnnGraph::build`]. Edges are ordered per parent: the first
/// edge of an `Implies` node is its antecedent, the second its consequent.
///
/// A [`super::Snapshot`] deserializes into this type, so exported snapshots
/// can be rebuilt.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub nodes: Vec<NodeSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub actions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LnnNode {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
    pub beta: f64,
    pub bounds: TruthBounds,
    pub asserted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LnnEdge {
    pub parent: String,
    pub child: String,
    pub weight: f64,
}

/// Acyclic weighted-logic graph. Nodes are stored in topological order
/// (children before parents).
#[derive(Debug, Clone, PartialEq)]
pub struct LnnGraph {
    pub(crate) nodes: Vec<LnnNode>,
    pub(crate) edges: Vec<LnnEdge>,
    /// Per node: `(child index, edge index)` in operand order.
    pub(crate) children: Vec<Vec<(usize, usize)>>,
    index: HashMap<String, usize>,
    fact_index: BTreeMap<String, usize>,
    action_index: Vec<usize>,
}

impl LnnGraph {
    pub fn build(spec: &GraphSpec) -> Result<LnnGraph, LnnError> {
        let mut decl: HashMap<&str, usize> = HashMap::new();
        for (i, n) in spec.nodes.iter().enumerate() {
            if decl.insert(n.id.as_str(), i).is_some() {
                return Err(LnnError::DuplicateId(n.id.clone()));
            }
            let beta = n.beta.unwrap_or(1.0);
            if !(beta >= 0.0 && beta.is_finite()) {
                return Err(LnnError::NegativeBeta { id: n.id.clone(), beta });
            }
        }

        let mut seen = HashSet::new();
        let mut operands: Vec<Vec<(usize, usize)>> = vec![Vec::new(); spec.nodes.len()];
        for (e, edge) in spec.edges.iter().enumerate() {
            let p = *decl.get(edge.parent.as_str()).ok_or_else(|| LnnError::UnknownNode(edge.parent.clone()))?;
            let c = *decl.get(edge.child.as_str()).ok_or_else(|| LnnError::UnknownNode(edge.child.clone()))?;
            if !(edge.weight >= 0.0 && edge.weight.is_finite()) {
                return Err(LnnError::NegativeWeight {
                    parent: edge.parent.clone(),
                    child: edge.child.clone(),
                    weight: edge.weight,
                });
            }
            if !seen.insert((p, c)) {
                return Err(LnnError::DuplicateEdge { parent: edge.parent.clone(), child: edge.child.clone() });
            }
            operands[p].push((c, e));
        }

        for (i, n) in spec.nodes.iter().enumerate() {
            if !n.kind.arity_ok(operands[i].len()) {
                return Err(LnnError::Arity { id: n.id.clone(), kind: n.kind, children: operands[i].len() });
            }
        }

        // Stable Kahn ordering: among ready nodes, lowest declaration index first.
        let mut pending: Vec<usize> = operands.iter().map(|ops| ops.len()).collect();
        let mut parents: Vec<Vec<usize>> = vec![Vec::new(); spec.nodes.len()];
        for (p, ops) in operands.iter().enumerate() {
            for &(c, _) in ops {
                parents[c].push(p);
            }
        }
        let mut ready: BTreeSet<usize> = (0..spec.nodes.len()).filter(|&i| pending[i] == 0).collect();
        let mut order = Vec::with_capacity(spec.nodes.len());
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &p in &parents[i] {
                pending[p] -= 1;
                if pending[p] == 0 {
                    ready.insert(p);
                }
            }
        }
        if order.len() != spec.nodes.len() {
            let stuck = (0..spec.nodes.len()).find(|&i| pending[i] > 0).unwrap();
            return Err(LnnError::Cycle(spec.nodes[stuck].id.clone()));
        }

        let mut position = vec![0; spec.nodes.len()];
        for (pos, &i) in order.iter().enumerate() {
            position[i] = pos;
        }

        let mut nodes = Vec::with_capacity(order.len());
        let mut index = HashMap::new();
        for &i in &order {
            let n = &spec.nodes[i];
            let default = if n.asserted { TruthBounds::TRUE } else { TruthBounds::UNKNOWN };
            let bounds =
                TruthBounds { lower: n.lower.unwrap_or(default.lower), upper: n.upper.unwrap_or(default.upper) };
            if !bounds.in_unit_range() {
                return Err(LnnError::BoundsOutOfRange { lower: bounds.lower, upper: bounds.upper });
            }
            index.insert(n.id.clone(), nodes.len());
            nodes.push(LnnNode {
                id: n.id.clone(),
                kind: n.kind,
                label: n.label.clone().unwrap_or_else(|| n.id.clone()),
                beta: n.beta.unwrap_or(1.0),
                bounds,
                asserted: n.asserted,
            });
        }

        let children = order.iter().map(|&i| operands[i].iter().map(|&(c, e)| (position[c], e)).collect()).collect();
        let edges = spec
            .edges
            .iter()
            .map(|e| LnnEdge { parent: e.parent.clone(), child: e.child.clone(), weight: e.weight })
            .collect();

        let mut action_index = Vec::with_capacity(spec.actions.len());
        for a in &spec.actions {
            let i = *index.get(a).ok_or_else(|| LnnError::UnknownNode(a.clone()))?;
            if !action_index.contains(&i) {
                action_index.push(i);
            }
        }
        let fact_index = nodes
            .iter()
            .enumerate()
            .filter(|(i, n)| n.kind == NodeKind::Proposition && !action_index.contains(i))
            .map(|(i, n)| (n.label.clone(), i))
            .collect();

        Ok(LnnGraph { nodes, edges, children, index, fact_index, action_index })
    }

    pub fn nodes(&self) -> &[LnnNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[LnnEdge] {
        &self.edges
    }

    pub fn node(&self, id: &str) -> Option<&LnnNode> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn bounds(&self, id: &str) -> Option<TruthBounds> {
        self.node(id).map(|n| n.bounds)
    }

    pub(crate) fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Operands of `id` as `(child id, weight)` in operand order.
    pub fn operands(&self, id: &str) -> Option<Vec<(&str, f64)>> {
        let i = self.index_of(id)?;
        Some(self.children[i].iter().map(|&(c, e)| (self.nodes[c].id.as_str(), self.edges[e].weight)).collect())
    }

    /// Action node ids in declaration order.
    pub fn actions(&self) -> impl Iterator<Item = &str> + '_ {
        self.action_index.iter().map(|&i| self.nodes[i].id.as_str())
    }

    pub fn is_action(&self, id: &str) -> bool {
        self.index_of(id).is_some_and(|i| self.action_index.contains(&i))
    }

    /// Proposition node id for a fact label, if the graph has one.
    pub fn fact_node(&self, label: &str) -> Option<&str> {
        self.fact_index.get(label).map(|&i| self.nodes[i].id.as_str())
    }

    pub fn fact_labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.fact_index.keys().map(String::as_str)
    }

    /// Fixes a proposition's bounds and marks it asserted.
    pub fn set_fact(&mut self, id: &str, bounds: TruthBounds) -> Result<(), LnnError> {
        let i = self.index_of(id).ok_or_else(|| LnnError::UnknownNode(id.to_string()))?;
        if self.nodes[i].kind != NodeKind::Proposition {
            return Err(LnnError::NotAProposition(id.to_string()));
        }
        if !bounds.in_unit_range() {
            return Err(LnnError::BoundsOutOfRange { lower: bounds.lower, upper: bounds.upper });
        }
        let node = &mut self.nodes[i];
        node.bounds = bounds;
        node.asserted = true;
        Ok(())
    }

    /// Un-asserts every asserted proposition and returns it to `[0, 1]`.
    /// Asserted gates (rules, constraints) are kept.
    pub fn retract_facts(&mut self) {
        for n in self.nodes.iter_mut().filter(|n| n.kind == NodeKind::Proposition && n.asserted) {
            n.asserted = false;
            n.bounds = TruthBounds::UNKNOWN;
        }
    }

    /// Resets every non-asserted node to `[0, 1]`. Parameters are untouched.
    pub fn reset_bounds(&mut self) {
        for n in self.nodes.iter_mut().filter(|n| !n.asserted) {
            n.bounds = TruthBounds::UNKNOWN;
        }
    }

    /// Σ max(0, lower − upper) over all nodes.
    pub fn contradiction_loss(&self) -> f64 {
        self.nodes.iter().map(|n| n.bounds.contradiction()).sum()
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeSpec {
                    id: n.id.clone(),
                    kind: n.kind,
                    label: Some(n.label.clone()),
                    beta: Some(n.beta),
                    asserted: n.asserted,
                    lower: Some(n.bounds.lower),
                    upper: Some(n.bounds.upper),
                })
                .collect(),
            edges: self.edges.iter().map(|e| EdgeSpec::new(&e.parent, &e.child, e.weight)).collect(),
            actions: self.actions().map(str::to_string).collect(),
        }
    }

    pub(crate) fn betas(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.beta).collect()
    }

    pub(crate) fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }
}
