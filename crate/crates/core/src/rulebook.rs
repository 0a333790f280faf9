//! Rule templates and their grounding into logic networks.
//!
//! A template such as `go(D) ← found(D) ∧ ¬visited(D)` is instantiated once
//! per direction. Propositions, negations and conjunctions are shared by id
//! across instances, so `found(north)` exists exactly once no matter how
//! many templates mention it.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Action, Direction};
use crate::lnn::{EdgeSpec, GraphSpec, LnnError, LnnGraph, NodeKind, NodeSpec, TruthBounds};

/// Predicates observable as facts.
pub const FACT_PREDICATES: [(&str, bool); 3] = [("found", true), ("visited", true), ("coin_here", false)];
/// Action predicates (rule heads).
pub const ACTION_PREDICATES: [(&str, bool); 2] = [("go", true), ("take_coin", false)];

pub const BUILTIN_NAMES: [&str; 3] = ["simple_nav", "avoid_revisit", "constraint_revisit"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RulebookError {
    #[error("unknown rulebook `{0}`")]
    UnknownRulebook(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("rule head `{0}` is not an action")]
    HeadNotAction(String),
    #[error("malformed literal `{0}`")]
    BadLiteral(String),
    #[error("predicate `{0}` used with the wrong number of arguments")]
    Arity(String),
    #[error("template `{0}` must share the variable D between head and body")]
    Variable(String),
    #[error("template `{0}` has an empty body")]
    EmptyBody(String),
    #[error("invalid rulebook file: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] LnnError),
}

/// `pred` or `pred(D)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub has_var: bool,
}

impl Atom {
    fn parse(text: &str) -> Result<Atom, RulebookError> {
        let t = text.trim();
        let bad = || RulebookError::BadLiteral(text.to_string());
        let (predicate, has_var) = match t.find('(') {
            None => (t, false),
            Some(open) => {
                let arg = t[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                if arg.trim() != "D" {
                    return Err(bad());
                }
                (&t[..open], true)
            }
        };
        if predicate.is_empty() || !predicate.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(bad());
        }
        Ok(Atom { predicate: predicate.to_string(), has_var })
    }

    fn ground(&self, d: Option<Direction>) -> String {
        match (self.has_var, d) {
            (true, Some(d)) => format!("{}({d})", self.predicate),
            _ => self.predicate.clone(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.has_var {
            write!(f, "{}(D)", self.predicate)
        } else {
            f.write_str(&self.predicate)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub negated: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn parse(text: &str) -> Result<Literal, RulebookError> {
        let t = text.trim();
        match t.strip_prefix('!').or_else(|| t.strip_prefix('¬')) {
            Some(rest) => Ok(Literal { negated: true, atom: Atom::parse(rest)? }),
            None => Ok(Literal { negated: false, atom: Atom::parse(t)? }),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!{}", self.atom)
        } else {
            write!(f, "{}", self.atom)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemplateKind {
    /// `head ← body`
    Rule,
    /// `body → ¬head`
    Constraint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TemplateRecord {
    head: String,
    body: Vec<String>,
    kind: TemplateKind,
    #[serde(default = "default_weight")]
    weight: f64,
}

fn default_weight() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TemplateRecord", into = "TemplateRecord")]
pub struct RuleTemplate {
    pub head: Atom,
    pub body: Vec<Literal>,
    pub kind: TemplateKind,
    pub initial_weight: f64,
}

impl TryFrom<TemplateRecord> for RuleTemplate {
    type Error = RulebookError;

    fn try_from(r: TemplateRecord) -> Result<Self, Self::Error> {
        let body = r.body.iter().map(|b| Literal::parse(b)).collect::<Result<_, _>>()?;
        RuleTemplate::new(Atom::parse(&r.head)?, body, r.kind, r.weight)
    }
}

impl From<RuleTemplate> for TemplateRecord {
    fn from(t: RuleTemplate) -> Self {
        TemplateRecord {
            head: t.head.to_string(),
            body: t.body.iter().map(ToString::to_string).collect(),
            kind: t.kind,
            weight: t.initial_weight,
        }
    }
}

fn arity_of(table: &[(&str, bool)], predicate: &str) -> Option<bool> {
    table.iter().find(|(p, _)| *p == predicate).map(|(_, unary)| *unary)
}

impl RuleTemplate {
    pub fn new(head: Atom, body: Vec<Literal>, kind: TemplateKind, initial_weight: f64) -> Result<Self, RulebookError> {
        let t = RuleTemplate { head, body, kind, initial_weight };
        t.validate()?;
        Ok(t)
    }

    /// Parses `head` and `body` literal strings.
    pub fn parse(head: &str, body: &[&str], kind: TemplateKind, initial_weight: f64) -> Result<Self, RulebookError> {
        let body = body.iter().map(|b| Literal::parse(b)).collect::<Result<_, _>>()?;
        RuleTemplate::new(Atom::parse(head)?, body, kind, initial_weight)
    }

    fn validate(&self) -> Result<(), RulebookError> {
        let name = self.to_string();
        match arity_of(&ACTION_PREDICATES, &self.head.predicate) {
            Some(unary) if unary != self.head.has_var => return Err(RulebookError::Arity(self.head.predicate.clone())),
            Some(_) => {}
            None if arity_of(&FACT_PREDICATES, &self.head.predicate).is_some() => {
                return Err(RulebookError::HeadNotAction(self.head.predicate.clone()))
            }
            None => return Err(RulebookError::UnknownPredicate(self.head.predicate.clone())),
        }
        if self.body.is_empty() {
            return Err(RulebookError::EmptyBody(name));
        }
        for lit in &self.body {
            match arity_of(&FACT_PREDICATES, &lit.atom.predicate) {
                Some(unary) if unary != lit.atom.has_var => {
                    return Err(RulebookError::Arity(lit.atom.predicate.clone()))
                }
                Some(_) => {}
                None => return Err(RulebookError::UnknownPredicate(lit.atom.predicate.clone())),
            }
        }
        let body_var = self.body.iter().any(|l| l.atom.has_var);
        if self.head.has_var != body_var {
            return Err(RulebookError::Variable(name));
        }
        if !(self.initial_weight >= 0.0 && self.initial_weight.is_finite()) {
            return Err(RulebookError::Graph(LnnError::NegativeWeight {
                parent: name,
                child: String::new(),
                weight: self.initial_weight,
            }));
        }
        Ok(())
    }
}

impl fmt::Display for RuleTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.body.iter().map(ToString::to_string).collect();
        match self.kind {
            TemplateKind::Rule => write!(f, "{} <- {}", self.head, body.join(" & ")),
            TemplateKind::Constraint => write!(f, "{} -> !{}", body.join(" & "), self.head),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rulebook {
    pub name: String,
    pub templates: Vec<RuleTemplate>,
}

impl Rulebook {
    /// Direction constants the templates are grounded over.
    pub fn constants() -> [Direction; 4] {
        Direction::ALL
    }

    pub fn builtin(name: &str) -> Result<Rulebook, RulebookError> {
        let rule = |head: &str, body: &[&str]| RuleTemplate::parse(head, body, TemplateKind::Rule, 1.0).unwrap();
        let take = rule("take_coin", &["coin_here"]);
        let templates = match name {
            "simple_nav" => vec![rule("go(D)", &["found(D)"]), take],
            "avoid_revisit" => vec![rule("go(D)", &["found(D)", "!visited(D)"]), take],
            "constraint_revisit" => vec![
                rule("go(D)", &["found(D)"]),
                RuleTemplate::parse("go(D)", &["visited(D)"], TemplateKind::Constraint, 1.0).unwrap(),
                take,
            ],
            other => return Err(RulebookError::UnknownRulebook(other.to_string())),
        };
        Ok(Rulebook { name: name.to_string(), templates })
    }

    pub fn from_json(text: &str) -> Result<Rulebook, RulebookError> {
        serde_json::from_str(text).map_err(|e| RulebookError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rulebook serializes")
    }

    /// Grounds every template over the direction constants.
    pub fn compile(&self) -> Result<LnnGraph, RulebookError> {
        LnnGraph::build(&self.graph_spec()?).map_err(RulebookError::from)
    }

    pub fn graph_spec(&self) -> Result<GraphSpec, RulebookError> {
        for t in &self.templates {
            t.validate()?;
        }
        let mut g = Grounding::default();
        for a in Action::ALL {
            g.actions.push(NodeSpec::proposition(a.node_id()));
        }
        for t in &self.templates {
            let groundings: Vec<Option<Direction>> =
                if t.head.has_var { Rulebook::constants().into_iter().map(Some).collect() } else { vec![None] };
            for d in groundings {
                g.instantiate(t, d);
            }
        }
        let mut nodes = g.facts;
        nodes.extend(g.actions);
        nodes.extend(g.gates);
        Ok(GraphSpec { nodes, edges: g.edges, actions: Action::ALL.iter().map(|a| a.node_id()).collect() })
    }
}

#[derive(Default)]
struct Grounding {
    facts: Vec<NodeSpec>,
    actions: Vec<NodeSpec>,
    gates: Vec<NodeSpec>,
    edges: Vec<EdgeSpec>,
    ids: HashSet<String>,
}

impl Grounding {
    fn proposition(&mut self, id: &str) -> String {
        if self.ids.insert(id.to_string()) && Action::from_node_id(id).is_none() {
            self.facts.push(NodeSpec::proposition(id));
        }
        id.to_string()
    }

    fn gate(&mut self, id: String, spec: NodeSpec, children: &[(String, f64)]) -> String {
        if self.ids.insert(id.clone()) {
            self.gates.push(spec);
            for (c, w) in children {
                self.edges.push(EdgeSpec::new(&id, c, *w));
            }
        }
        id
    }

    fn negation(&mut self, atom_id: &str) -> String {
        let id = format!("not:{atom_id}");
        self.gate(
            id.clone(),
            NodeSpec::new(&id, NodeKind::Not).label(format!("¬{atom_id}")),
            &[(atom_id.to_string(), 1.0)],
        )
    }

    fn literal(&mut self, lit: &Literal, d: Option<Direction>) -> (String, String) {
        let atom = self.proposition(&lit.atom.ground(d));
        if lit.negated {
            (self.negation(&atom), format!("¬{atom}"))
        } else {
            (atom.clone(), atom)
        }
    }

    fn instantiate(&mut self, t: &RuleTemplate, d: Option<Direction>) {
        let w = t.initial_weight;
        let lits: Vec<(String, String)> = t.body.iter().map(|l| self.literal(l, d)).collect();
        let body_text = lits.iter().map(|(_, s)| s.as_str()).collect::<Vec<_>>().join("∧");
        let body = if lits.len() == 1 {
            lits[0].0.clone()
        } else {
            let id = format!("and:{body_text}");
            let children: Vec<(String, f64)> = lits.iter().map(|(n, _)| (n.clone(), w)).collect();
            self.gate(id.clone(), NodeSpec::new(&id, NodeKind::And).label("∧"), &children)
        };
        let head = self.proposition(&t.head.ground(d));
        match t.kind {
            TemplateKind::Rule => {
                let id = format!("rule:{head}←{body_text}");
                let spec = NodeSpec::new(&id, NodeKind::Implies).label("→").asserted(TruthBounds::TRUE);
                self.gate(id, spec, &[(body, w), (head, w)]);
            }
            TemplateKind::Constraint => {
                let not_head = self.negation(&head);
                let id = format!("constraint:{body_text}→¬{head}");
                let spec = NodeSpec::new(&id, NodeKind::Implies).label("→").asserted(TruthBounds::TRUE);
                self.gate(id, spec, &[(body, w), (not_head, w)]);
            }
        }
    }
}
