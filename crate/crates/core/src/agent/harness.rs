//! Episodes, training runs and their JSON-lines records.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::game::{self, parse_command, Action, ActionCommand, Layout};
use crate::lnn::{LnnGraph, TrainConfig};
use crate::parser::{FactSet, Perception};
use crate::rng::Lcg;
use crate::rulebook::Rulebook;

use super::{loa_decide, loa_observe, q_decide, q_update, random_decide, AgentConfig, AgentError, QTable, Transition};

#[derive(Debug, Clone, PartialEq)]
pub enum AgentKind {
    Loa(Rulebook),
    Random,
    TabQ,
}

impl AgentKind {
    /// `loa` (with the given rulebook name), `random` or `tabq`.
    pub fn parse(name: &str, rulebook: &str) -> Result<AgentKind, AgentError> {
        match name {
            "loa" => Ok(AgentKind::Loa(Rulebook::builtin(rulebook)?)),
            "random" => Ok(AgentKind::Random),
            "tabq" => Ok(AgentKind::TabQ),
            other => Err(AgentError::UnknownAgent(other.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            AgentKind::Loa(rb) => format!("loa({})", rb.name),
            AgentKind::Random => "random".into(),
            AgentKind::TabQ => "tabq".into(),
        }
    }
}

#[derive(Debug, Clone)]
enum Brain {
    Loa { graph: LnnGraph, config: AgentConfig, train: TrainConfig },
    Random,
    TabQ { table: QTable },
}

/// A stateful agent. Learned state (network parameters, Q-table) and the
/// random stream persist across episodes.
#[derive(Debug, Clone)]
pub struct Agent {
    name: String,
    brain: Brain,
    rng: Lcg,
}

impl Agent {
    pub fn new(kind: &AgentKind, seed: u64) -> Result<Agent, AgentError> {
        let brain = match kind {
            AgentKind::Loa(rb) => {
                Brain::Loa { graph: rb.compile()?, config: AgentConfig::default(), train: TrainConfig::default() }
            }
            AgentKind::Random => Brain::Random,
            AgentKind::TabQ => Brain::TabQ { table: QTable::default() },
        };
        Ok(Agent { name: kind.name(), brain, rng: Lcg::new(seed) })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> Option<&LnnGraph> {
        match &self.brain {
            Brain::Loa { graph, .. } => Some(graph),
            _ => None,
        }
    }

    pub fn decide(&mut self, facts: &FactSet) -> Result<Action, AgentError> {
        match &mut self.brain {
            Brain::Loa { graph, config, .. } => {
                if config.explore_epsilon > 0.0 && self.rng.next_f64() < config.explore_epsilon {
                    return Ok(random_decide(facts, &mut self.rng));
                }
                Ok(loa_decide(graph, facts, config)?.chosen)
            }
            Brain::Random => Ok(random_decide(facts, &mut self.rng)),
            Brain::TabQ { table } => Ok(q_decide(table, facts, &mut self.rng)),
        }
    }

    fn learn_step(&mut self, facts: &FactSet, action: Action, reward: f64, next: &FactSet, done: bool) {
        if let Brain::TabQ { table } = &mut self.brain {
            q_update(table, facts, action, reward, next, done);
        }
    }

    /// Credits every decision of a finished episode with the episode return.
    fn learn_episode(&mut self, transitions: &[Transition], episode_return: f64) -> Result<(), AgentError> {
        if let Brain::Loa { graph, train, .. } = &mut self.brain {
            for t in transitions {
                let credited = Transition { reward: episode_return, ..t.clone() };
                loa_observe(graph, &credited, train)?;
            }
        }
        Ok(())
    }
}

/// One transition record: the observation the agent acted on, the facts it
/// perceived, the command and its outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub t: usize,
    pub obs: String,
    pub facts: Vec<String>,
    pub action: String,
    pub reward: f64,
    pub done: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeLog {
    pub entries: Vec<LogEntry>,
    pub steps: usize,
    pub score: i64,
    pub episode_return: f64,
}

impl EpisodeLog {
    pub fn solved(&self) -> bool {
        self.episode_return == 1.0
    }

    pub fn to_jsonl(&self) -> String {
        self.entries.iter().map(|e| serde_json::to_string(e).unwrap() + "\n").collect()
    }
}

/// Plays one episode with `agent` and applies its learning rule.
pub fn run_episode(layout: &Arc<Layout>, agent: &mut Agent, max_steps: usize) -> Result<EpisodeLog, AgentError> {
    let (mut state, first) = game::new_game(layout.clone(), max_steps)?;
    let mut perception = Perception::new(&first.text);
    let mut obs_text = first.text;
    let mut entries = Vec::new();
    let mut transitions = Vec::new();
    let mut episode_return = 0.0;
    while !state.done {
        let facts = perception.facts();
        let action = agent.decide(&facts)?;
        let command = ActionCommand::from(action);
        let (next, obs) = game::step(&state, &command)?;
        perception.observe(&command, &obs.text);
        let next_facts = perception.facts();
        agent.learn_step(&facts, action, obs.reward, &next_facts, obs.done);
        episode_return += obs.reward;
        entries.push(LogEntry {
            t: state.steps,
            obs: obs_text,
            facts: facts.labels(),
            action: action.label(),
            reward: obs.reward,
            done: obs.done,
        });
        transitions.push(Transition { facts, action, reward: obs.reward, done: obs.done });
        obs_text = obs.text;
        state = next;
    }
    agent.learn_episode(&transitions, episode_return)?;
    Ok(EpisodeLog { entries, steps: state.steps, score: state.score, episode_return })
}

/// Feeds a log's commands through a fresh game and returns the rewards.
pub fn replay_rewards(layout: &Arc<Layout>, max_steps: usize, entries: &[LogEntry]) -> Result<Vec<f64>, AgentError> {
    let (mut state, _) = game::new_game(layout.clone(), max_steps)?;
    let mut rewards = Vec::with_capacity(entries.len());
    for e in entries {
        let (next, obs) = game::step(&state, &parse_command(&e.action))?;
        rewards.push(obs.reward);
        state = next;
    }
    Ok(rewards)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeMetrics {
    pub episode: usize,
    pub steps: usize,
    #[serde(rename = "return")]
    pub episode_return: f64,
    pub solved: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub agent_name: String,
    pub seed: u64,
    pub episodes: Vec<EpisodeMetrics>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

impl RunMetrics {
    pub fn to_jsonl(&self) -> String {
        self.episodes.iter().map(|e| serde_json::to_string(e).unwrap() + "\n").collect()
    }

    pub fn from_jsonl(agent_name: &str, seed: u64, text: &str) -> Result<RunMetrics, serde_json::Error> {
        let episodes =
            text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect::<Result<_, _>>()?;
        Ok(RunMetrics { agent_name: agent_name.to_string(), seed, episodes })
    }

    /// Median step count over episodes `range` (clamped to the run).
    pub fn median_steps(&self, range: std::ops::Range<usize>) -> f64 {
        let end = range.end.min(self.episodes.len());
        let start = range.start.min(end);
        median(self.episodes[start..end].iter().map(|e| e.steps as f64).collect())
    }

    pub fn median_steps_all(&self) -> f64 {
        self.median_steps(0..self.episodes.len())
    }

    /// Median steps over the first and last fifth of the run (at least one episode each).
    pub fn quintile_medians(&self) -> (f64, f64) {
        let n = self.episodes.len();
        let k = (n / 5).max(1);
        (self.median_steps(0..k), self.median_steps(n.saturating_sub(k)..n))
    }

    pub fn solve_rate(&self) -> f64 {
        if self.episodes.is_empty() {
            return 0.0;
        }
        self.episodes.iter().filter(|e| e.solved).count() as f64 / self.episodes.len() as f64
    }
}

/// Runs `episodes` episodes on the same layout with one persistent agent.
pub fn train_run(
    layout: &Arc<Layout>,
    kind: &AgentKind,
    episodes: usize,
    seed: u64,
    max_steps: usize,
) -> Result<(RunMetrics, Vec<EpisodeLog>), AgentError> {
    if episodes == 0 {
        return Err(AgentError::NoEpisodes);
    }
    let mut agent = Agent::new(kind, seed)?;
    let mut metrics = Vec::with_capacity(episodes);
    let mut logs = Vec::with_capacity(episodes);
    for episode in 0..episodes {
        let log = run_episode(layout, &mut agent, max_steps)?;
        metrics.push(EpisodeMetrics {
            episode,
            steps: log.steps,
            episode_return: log.episode_return,
            solved: log.solved(),
        });
        logs.push(log);
    }
    Ok((RunMetrics { agent_name: kind.name(), seed, episodes: metrics }, logs))
}
