//! Propositional logical neural network.
//!
//! Every node carries [`TruthBounds`]; gates evaluate weighted Łukasiewicz
//! formulas upward from their children and tighten their children downward
//! through the functional inverses. Bounds only ever tighten and are allowed
//! to cross, in which case the crossing is reported as contradiction.

mod gate;
mod graph;
mod infer;
pub mod scalar;
mod snapshot;
mod train;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gate::{downward, upward, Tightening, MIN_INVERSE_WEIGHT};
pub use graph::{EdgeSpec, GraphSpec, LnnEdge, LnnGraph, LnnNode, NodeSpec};
pub use infer::{InferenceConfig, InferenceReport};
pub use snapshot::{Snapshot, SnapshotEdge, SnapshotNode, Truth};
pub use train::{TrainConfig, TrainOutcome};

/// Lower and upper truth value of a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthBounds<S = f64> {
    pub lower: S,
    pub upper: S,
}

impl TruthBounds {
    pub const UNKNOWN: TruthBounds = TruthBounds { lower: 0.0, upper: 1.0 };
    pub const TRUE: TruthBounds = TruthBounds { lower: 1.0, upper: 1.0 };
    pub const FALSE: TruthBounds = TruthBounds { lower: 0.0, upper: 0.0 };

    pub fn new(lower: f64, upper: f64) -> Result<Self, LnnError> {
        let b = TruthBounds { lower, upper };
        if b.in_unit_range() {
            Ok(b)
        } else {
            Err(LnnError::BoundsOutOfRange { lower, upper })
        }
    }

    pub fn in_unit_range(&self) -> bool {
        (0.0..=1.0).contains(&self.lower) && (0.0..=1.0).contains(&self.upper)
    }

    /// `max(0, lower − upper)`.
    pub fn contradiction(&self) -> f64 {
        (self.lower - self.upper).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Proposition,
    And,
    Or,
    Not,
    Implies,
}

impl NodeKind {
    pub fn is_gate(self) -> bool {
        self != NodeKind::Proposition
    }

    /// Whether the gate carries a trainable β and edge weights.
    pub fn is_weighted(self) -> bool {
        matches!(self, NodeKind::And | NodeKind::Or | NodeKind::Implies)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Proposition => "proposition",
            NodeKind::And => "and",
            NodeKind::Or => "or",
            NodeKind::Not => "not",
            NodeKind::Implies => "implies",
        }
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            NodeKind::Proposition => n == 0,
            NodeKind::Not => n == 1,
            NodeKind::Implies => n == 2,
            NodeKind::And | NodeKind::Or => n >= 1,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LnnError {
    #[error("duplicate node id `{0}`")]
    DuplicateId(String),
    #[error("unknown node id `{0}`")]
    UnknownNode(String),
    #[error("duplicate edge `{parent}` -> `{child}`")]
    DuplicateEdge { parent: String, child: String },
    #[error("cycle detected through `{0}`")]
    Cycle(String),
    #[error("{kind:?} node `{id}` has {children} children")]
    Arity { id: String, kind: NodeKind, children: usize },
    #[error("negative weight {weight} on edge `{parent}` -> `{child}`")]
    NegativeWeight { parent: String, child: String, weight: f64 },
    #[error("negative beta {beta} on node `{id}`")]
    NegativeBeta { id: String, beta: f64 },
    #[error("bounds [{lower}, {upper}] outside the unit interval")]
    BoundsOutOfRange { lower: f64, upper: f64 },
    #[error("node `{0}` is not a proposition")]
    NotAProposition(String),
    #[error("`{0}` is not an action node")]
    UnknownAction(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
