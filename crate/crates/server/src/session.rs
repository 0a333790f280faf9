//! Game sessions and the in-memory store that holds them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use loa_core::agent::{loa_decide, AgentConfig, Recommendation};
use loa_core::game::{self, generate_layout, parse_command, GameState, Layout, LayoutFile, DEFAULT_MAX_STEPS};
use loa_core::lnn::{LnnGraph, Snapshot};
use loa_core::parser::Perception;
use loa_core::rulebook::{Rulebook, BUILTIN_NAMES};
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex as AsyncMutex;

use crate::error::{ApiError, ErrorCode};

pub const GAME_ID: &str = "coin_collector";
pub const DEFAULT_TTL: Duration = Duration::from_secs(60 * 60);

/// `"layout"` is either a named fixture or an inline layout file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LayoutChoice {
    Named(String),
    Inline(LayoutFile),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CreateRequest {
    pub game: String,
    pub rulebook: String,
    #[serde(default)]
    pub layout: Option<LayoutChoice>,
    #[serde(default)]
    pub chain_length: Option<usize>,
    #[serde(default)]
    pub branches: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRequest {
    pub command: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepPayload {
    pub observation: String,
    pub reward: f64,
    pub score: i64,
    pub done: bool,
    pub recommendations: Vec<Recommendation>,
    pub lnn: Snapshot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreatePayload {
    pub id: String,
    pub game: String,
    pub rulebook: String,
    #[serde(flatten)]
    pub state: StepPayload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub command: String,
    pub observation: String,
    pub reward: f64,
    pub recommendations: Vec<Recommendation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub game: String,
    pub rulebook: String,
    pub observation: String,
    pub score: i64,
    pub done: bool,
    pub steps: usize,
    pub max_steps: usize,
    pub facts: Vec<String>,
    pub recommendations: Vec<Recommendation>,
    pub history: Vec<HistoryEntry>,
}

/// One game in progress with its perception state and logic network.
#[derive(Debug)]
pub struct Session {
    id: String,
    rulebook: String,
    state: GameState,
    perception: Perception,
    graph: LnnGraph,
    config: AgentConfig,
    current: StepPayload,
    history: Vec<HistoryEntry>,
}

fn resolve_layout(req: &CreateRequest) -> Result<Layout, ApiError> {
    let bad = |e: game::GameError| ApiError::bad_request(e.to_string());
    match (&req.layout, req.chain_length) {
        (Some(_), Some(_)) => Err(ApiError::bad_request("give either `layout` or `chain_length`, not both")),
        (Some(LayoutChoice::Named(name)), None) => match name.as_str() {
            "fix_a" | "FIX-A" => Ok(Layout::fix_a()),
            other => Err(ApiError::bad_request(format!("unknown layout `{other}`"))),
        },
        (Some(LayoutChoice::Inline(file)), None) => Layout::from_file(file).map_err(bad),
        (None, Some(chain)) => generate_layout(chain, req.branches.unwrap_or(0), req.seed.unwrap_or(0)).map_err(bad),
        (None, None) => Ok(Layout::fix_a()),
    }
}

impl Session {
    pub fn create(id: String, req: &CreateRequest) -> Result<Session, ApiError> {
        if req.game != GAME_ID {
            return Err(ApiError::new(ErrorCode::UnknownGame, format!("unknown game `{}`", req.game)));
        }
        let rulebook =
            Rulebook::builtin(&req.rulebook).map_err(|e| ApiError::new(ErrorCode::UnknownRulebook, e.to_string()))?;
        let graph = rulebook.compile().map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))?;
        let layout = Arc::new(resolve_layout(req)?);
        let (state, obs) = game::new_game(layout, req.max_steps.unwrap_or(DEFAULT_MAX_STEPS))
            .map_err(|e| ApiError::bad_request(e.to_string()))?;
        let perception = Perception::new(&obs.text);
        let mut session = Session {
            id,
            rulebook: rulebook.name,
            state,
            perception,
            graph,
            config: AgentConfig::default(),
            current: StepPayload {
                observation: obs.text,
                reward: obs.reward,
                score: obs.score,
                done: obs.done,
                recommendations: Vec::new(),
                lnn: Snapshot { nodes: Vec::new(), edges: Vec::new(), actions: Vec::new() },
            },
            history: Vec::new(),
        };
        session.refresh()?;
        Ok(session)
    }

    /// Re-runs the network on the current facts.
    fn refresh(&mut self) -> Result<(), ApiError> {
        let decision = loa_decide(&mut self.graph, &self.perception.facts(), &self.config)
            .map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))?;
        self.current.recommendations = decision.recommendations;
        self.current.lnn = self.graph.export_snapshot();
        Ok(())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn payload(&self) -> &StepPayload {
        &self.current
    }

    pub fn create_payload(&self) -> CreatePayload {
        CreatePayload {
            id: self.id.clone(),
            game: GAME_ID.to_string(),
            rulebook: self.rulebook.clone(),
            state: self.current.clone(),
        }
    }

    pub fn snapshot(&self) -> &Snapshot {
        &self.current.lnn
    }

    pub fn step(&mut self, command: &str) -> Result<StepPayload, ApiError> {
        if self.state.done {
            return Err(ApiError::new(ErrorCode::SessionDone, "the game is over"));
        }
        let parsed = parse_command(command);
        let (next, obs) =
            game::step(&self.state, &parsed).map_err(|e| ApiError::new(ErrorCode::SessionDone, e.to_string()))?;
        self.state = next;
        self.perception.observe(&parsed, &obs.text);
        self.current.observation = obs.text;
        self.current.reward = obs.reward;
        self.current.score = obs.score;
        self.current.done = obs.done;
        self.refresh()?;
        self.history.push(HistoryEntry {
            command: command.to_string(),
            observation: self.current.observation.clone(),
            reward: self.current.reward,
            recommendations: self.current.recommendations.clone(),
        });
        Ok(self.current.clone())
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            id: self.id.clone(),
            game: GAME_ID.to_string(),
            rulebook: self.rulebook.clone(),
            observation: self.current.observation.clone(),
            score: self.current.score,
            done: self.current.done,
            steps: self.state.steps,
            max_steps: self.state.max_steps,
            facts: self.perception.facts().labels(),
            recommendations: self.current.recommendations.clone(),
            history: self.history.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameInfo {
    pub id: String,
    pub name: String,
    pub rulebooks: Vec<String>,
    pub layouts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameCatalog {
    pub games: Vec<GameInfo>,
}

pub fn catalog() -> GameCatalog {
    GameCatalog {
        games: vec![GameInfo {
            id: GAME_ID.to_string(),
            name: "Coin Collector".to_string(),
            rulebooks: BUILTIN_NAMES.iter().map(|s| s.to_string()).collect(),
            layouts: vec!["fix_a".to_string()],
        }],
    }
}

struct Entry {
    session: Arc<AsyncMutex<Session>>,
    last_used: Instant,
}

/// Sessions keyed by id. Each session has its own lock so distinct sessions
/// proceed in parallel; entries idle longer than the TTL are dropped.
pub struct SessionStore {
    sessions: Mutex<HashMap<String, Entry>>,
    ttl: Duration,
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        SessionStore { sessions: Mutex::new(HashMap::new()), ttl }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle for longer than the TTL; returns how many.
    pub fn evict_idle(&self, now: Instant) -> usize {
        let mut map = self.sessions.lock().unwrap();
        let before = map.len();
        map.retain(|_, e| now.duration_since(e.last_used) <= self.ttl);
        before - map.len()
    }

    pub fn create(&self, req: &CreateRequest) -> Result<CreatePayload, ApiError> {
        self.evict_idle(Instant::now());
        let id = uuid::Uuid::new_v4().to_string();
        let session = Session::create(id.clone(), req)?;
        let payload = session.create_payload();
        let entry = Entry { session: Arc::new(AsyncMutex::new(session)), last_used: Instant::now() };
        self.sessions.lock().unwrap().insert(id, entry);
        Ok(payload)
    }

    /// Looks up a session and marks it used.
    pub fn get(&self, id: &str) -> Result<Arc<AsyncMutex<Session>>, ApiError> {
        let now = Instant::now();
        self.evict_idle(now);
        let mut map = self.sessions.lock().unwrap();
        let entry =
            map.get_mut(id).ok_or_else(|| ApiError::new(ErrorCode::UnknownSession, format!("no session `{id}`")))?;
        entry.last_used = now;
        Ok(entry.session.clone())
    }
}

impl Default for SessionStore {
    fn default() -> Self {
        SessionStore::new(DEFAULT_TTL)
    }
}
