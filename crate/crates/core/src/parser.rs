//! Pattern-based semantic parser for game observations, plus the spatial
//! tracker that turns movement history into `visited(direction)` facts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::LazyLock;

use regex::Regex;

use crate::game::{ActionCommand, Direction};

static HEADER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?m)^= Room (.+?) =$").unwrap());
static ONE_EXIT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)There is an exit to the (north|east|south|west)\.").unwrap());
static MANY_EXITS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)There are exits to the ([a-z ,]+)\.").unwrap());
static DIRECTION_WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(north|east|south|west)\b").unwrap());
static COIN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)There is a coin here\.").unwrap());

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    Found(Direction),
    Visited(Direction),
    CoinHere,
}

impl Fact {
    /// Proposition label, e.g. `found(north)` or `coin_here`.
    pub fn label(&self) -> String {
        match self {
            Fact::Found(d) => format!("found({d})"),
            Fact::Visited(d) => format!("visited({d})"),
            Fact::CoinHere => "coin_here".to_string(),
        }
    }

    pub fn parse(label: &str) -> Option<Fact> {
        let label = label.trim();
        if label == "coin_here" {
            return Some(Fact::CoinHere);
        }
        let (pred, rest) = label.split_once('(')?;
        let d = Direction::parse(rest.strip_suffix(')')?.trim())?;
        match pred.trim() {
            "found" => Some(Fact::Found(d)),
            "visited" => Some(Fact::Visited(d)),
            _ => None,
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FactSet(BTreeSet<Fact>);

impl FactSet {
    pub fn new() -> Self {
        FactSet::default()
    }

    pub fn insert(&mut self, fact: Fact) -> bool {
        self.0.insert(fact)
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.0.contains(fact)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fact> + '_ {
        self.0.iter()
    }

    pub fn found(&self) -> impl Iterator<Item = Direction> + '_ {
        self.0.iter().filter_map(|f| match f {
            Fact::Found(d) => Some(*d),
            _ => None,
        })
    }

    pub fn has_exits(&self) -> bool {
        self.found().next().is_some()
    }

    /// Labels in sorted order.
    pub fn labels(&self) -> Vec<String> {
        self.0.iter().map(Fact::label).collect()
    }
}

impl FromIterator<Fact> for FactSet {
    fn from_iter<I: IntoIterator<Item = Fact>>(iter: I) -> Self {
        FactSet(iter.into_iter().collect())
    }
}

/// Room label from the observation header, if any.
pub fn parse_room(text: &str) -> Option<String> {
    HEADER.captures(text).map(|c| c[1].to_string())
}

/// Extracts `found(d)` for every exit mentioned and `coin_here` for the coin
/// sentence. Unrecognised sentences are ignored.
pub fn parse_observation(text: &str) -> FactSet {
    let mut facts = FactSet::new();
    for c in ONE_EXIT.captures_iter(text) {
        if let Some(d) = Direction::parse(&c[1].to_lowercase()) {
            facts.insert(Fact::Found(d));
        }
    }
    for c in MANY_EXITS.captures_iter(text) {
        for w in DIRECTION_WORD.captures_iter(&c[1]) {
            if let Some(d) = Direction::parse(&w[1].to_lowercase()) {
                facts.insert(Fact::Found(d));
            }
        }
    }
    if COIN.is_match(text) {
        facts.insert(Fact::CoinHere);
    }
    facts
}

/// Cross-step spatial memory: rooms placed on lattice coordinates by
/// dead reckoning from the executed moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tracker {
    pub current_room: String,
    pub position: (i32, i32),
    pub room_positions: BTreeMap<String, (i32, i32)>,
    pub visited_rooms: BTreeSet<String>,
}

impl Tracker {
    /// Starts at the origin in the room named by the first observation.
    pub fn new(initial_observation: &str) -> Tracker {
        let room = parse_room(initial_observation).unwrap_or_default();
        Tracker {
            current_room: room.clone(),
            position: (0, 0),
            room_positions: BTreeMap::from([(room.clone(), (0, 0))]),
            visited_rooms: BTreeSet::from([room]),
        }
    }

    /// A move succeeded when `executed` was `Go(d)` and the observation shows
    /// a room header; anything else leaves the tracker unchanged.
    pub fn update(&self, executed: &ActionCommand, observation: &str) -> Tracker {
        let mut next = self.clone();
        if let (ActionCommand::Go(d), Some(room)) = (executed, parse_room(observation)) {
            next.position = d.step_from(self.position);
            next.current_room = room.clone();
            next.room_positions.insert(room.clone(), next.position);
            next.visited_rooms.insert(room);
        }
        next
    }

    /// Passes `found` through and adds `visited(d)` for every found exit whose
    /// neighbouring coordinate holds an entered room.
    pub fn facts(&self, found: &FactSet) -> FactSet {
        let entered: BTreeSet<(i32, i32)> =
            self.room_positions.iter().filter(|(r, _)| self.visited_rooms.contains(*r)).map(|(_, p)| *p).collect();
        let mut out = found.clone();
        for d in found.found() {
            if entered.contains(&d.step_from(self.position)) {
                out.insert(Fact::Visited(d));
            }
        }
        out
    }
}

/// Parser plus tracker as used by an agent: keeps the last seen exits when an
/// observation (e.g. "You can't go that way.") carries none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perception {
    pub tracker: Tracker,
    exits: FactSet,
}

impl Perception {
    pub fn new(initial_observation: &str) -> Perception {
        Perception { tracker: Tracker::new(initial_observation), exits: parse_observation(initial_observation) }
    }

    pub fn observe(&mut self, executed: &ActionCommand, observation: &str) {
        self.tracker = self.tracker.update(executed, observation);
        let parsed = parse_observation(observation);
        if parsed.has_exits() || parse_room(observation).is_some() {
            self.exits = parsed;
        } else if matches!(executed, ActionCommand::TakeCoin) {
            self.exits = self.exits.iter().copied().filter(|f| *f != Fact::CoinHere).collect();
        }
    }

    /// Current facts: exits, coin, and visited directions.
    pub fn facts(&self) -> FactSet {
        self.tracker.facts(&self.exits)
    }
}
