//! Agents and the perceive → decide → act → learn loop.

mod baseline;
mod harness;
mod loa;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Action, GameError};
use crate::lnn::{InferenceConfig, LnnError};
use crate::parser::{Fact, FactSet};
use crate::rulebook::RulebookError;

pub use baseline::{q_decide, q_update, random_decide, state_key, QTable};
pub use harness::{
    replay_rewards, run_episode, train_run, Agent, AgentKind, EpisodeLog, EpisodeMetrics, LogEntry, RunMetrics,
};
pub use loa::{assert_facts, loa_decide, loa_observe, Decision};

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("fact `{0}` has no proposition in the network")]
    Vocabulary(String),
    #[error("episodes must be at least 1")]
    NoEpisodes,
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error(transparent)]
    Lnn(#[from] LnnError),
    #[error(transparent)]
    Rulebook(#[from] RulebookError),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub action: String,
    pub lower: f64,
    pub upper: f64,
    pub recommended: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentConfig {
    /// Both bounds must reach `tau` for an action to be recommended.
    pub tau: f64,
    pub tie_order: Vec<Action>,
    pub explore_epsilon: f64,
    pub inference: InferenceConfig,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            tau: 0.5,
            tie_order: Action::ALL.to_vec(),
            explore_epsilon: 0.0,
            inference: InferenceConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub facts: FactSet,
    pub action: Action,
    pub reward: f64,
    pub done: bool,
}

/// Actions the facts make sensible, in tie order: `go d` for each found exit,
/// `take coin` when the coin is here.
pub fn applicable_actions(facts: &FactSet, tie_order: &[Action]) -> Vec<Action> {
    tie_order
        .iter()
        .copied()
        .filter(|a| match a {
            Action::Go(d) => facts.contains(&Fact::Found(*d)),
            Action::TakeCoin => facts.contains(&Fact::CoinHere),
        })
        .collect()
}
