//! Deterministic coin-collector text game.
//!
//! Rooms sit on a square lattice and are joined by symmetric north/east/
//! south/west connections. The quest is to reach the coin room and
//! `take coin`; the only reward is the terminal +1.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::Lcg;

pub const DEFAULT_MAX_STEPS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    North,
    East,
    South,
    West,
}

impl Direction {
    /// Canonical order, also the order exits are listed in.
    pub const ALL: [Direction; 4] = [Direction::North, Direction::East, Direction::South, Direction::West];

    pub fn opposite(self) -> Direction {
        match self {
            Direction::North => Direction::South,
            Direction::East => Direction::West,
            Direction::South => Direction::North,
            Direction::West => Direction::East,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::North => "north",
            Direction::East => "east",
            Direction::South => "south",
            Direction::West => "west",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.as_str() == s)
    }

    /// Lattice offset; north is +y, east is +x.
    pub fn unit(self) -> (i32, i32) {
        match self {
            Direction::North => (0, 1),
            Direction::East => (1, 0),
            Direction::South => (0, -1),
            Direction::West => (-1, 0),
        }
    }

    pub fn step_from(self, (x, y): (i32, i32)) -> (i32, i32) {
        let (dx, dy) = self.unit();
        (x + dx, y + dy)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A well-formed game action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Go(Direction),
    TakeCoin,
}

impl Action {
    /// Fixed tie-breaking order.
    pub const ALL: [Action; 5] = [
        Action::Go(Direction::North),
        Action::Go(Direction::East),
        Action::Go(Direction::South),
        Action::Go(Direction::West),
        Action::TakeCoin,
    ];

    /// Command text, e.g. `go north`.
    pub fn label(self) -> String {
        match self {
            Action::Go(d) => format!("go {d}"),
            Action::TakeCoin => "take coin".to_string(),
        }
    }

    /// Id of the action's proposition in compiled rulebooks, e.g. `go(north)`.
    pub fn node_id(self) -> String {
        match self {
            Action::Go(d) => format!("go({d})"),
            Action::TakeCoin => "take_coin".to_string(),
        }
    }

    pub fn from_node_id(id: &str) -> Option<Action> {
        Action::ALL.into_iter().find(|a| a.node_id() == id)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ActionCommand {
    Go(Direction),
    TakeCoin,
    Invalid(String),
}

impl ActionCommand {
    pub fn action(&self) -> Option<Action> {
        match self {
            ActionCommand::Go(d) => Some(Action::Go(*d)),
            ActionCommand::TakeCoin => Some(Action::TakeCoin),
            ActionCommand::Invalid(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            ActionCommand::Invalid(text) => text.clone(),
            other => other.action().unwrap().label(),
        }
    }
}

impl From<Action> for ActionCommand {
    fn from(a: Action) -> Self {
        match a {
            Action::Go(d) => ActionCommand::Go(d),
            Action::TakeCoin => ActionCommand::TakeCoin,
        }
    }
}

/// Case-insensitive, whitespace-tolerant command grammar:
/// `go (north|east|south|west)` and `take coin`.
pub fn parse_command(text: &str) -> ActionCommand {
    let lowered = text.trim().to_lowercase();
    let words: Vec<&str> = lowered.split_whitespace().collect();
    match words.as_slice() {
        ["go", dir] => match Direction::parse(dir) {
            Some(d) => ActionCommand::Go(d),
            None => ActionCommand::Invalid(text.to_string()),
        },
        ["take", "coin"] => ActionCommand::TakeCoin,
        _ => ActionCommand::Invalid(text.to_string()),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("chain length must be at least 1")]
    EmptyChain,
    #[error("{requested} branches requested but only {available} attachment slots")]
    TooManyBranches { requested: usize, available: usize },
    #[error("no self-avoiding path found")]
    PathGeneration,
    #[error("layout has no rooms")]
    NoRooms,
    #[error("duplicate room `{0}`")]
    DuplicateRoom(String),
    #[error("unknown room `{0}`")]
    UnknownRoom(String),
    #[error("unknown direction `{0}`")]
    UnknownDirection(String),
    #[error("conflicting connection from `{room}` to the {dir}")]
    ConflictingConnection { room: String, dir: Direction },
    #[error("coin room is unreachable from the start")]
    CoinUnreachable,
    #[error("max_steps must be at least 1")]
    ZeroMaxSteps,
    #[error("the game is over")]
    GameOver,
    #[error("invalid layout file: {0}")]
    Parse(String),
}

/// Room graph with symmetric connections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    rooms: Vec<String>,
    connections: BTreeMap<(String, Direction), String>,
    start: String,
    coin_room: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionRecord {
    pub from: String,
    pub dir: String,
    pub to: String,
}

/// On-disk layout format. Reverse connections may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutFile {
    pub rooms: Vec<String>,
    pub connections: Vec<ConnectionRecord>,
    pub start: String,
    pub coin: String,
}

impl Layout {
    /// Builds and validates a layout, completing reverse connections.
    pub fn new(
        rooms: Vec<String>,
        connections: impl IntoIterator<Item = (String, Direction, String)>,
        start: impl Into<String>,
        coin_room: impl Into<String>,
    ) -> Result<Layout, GameError> {
        if rooms.is_empty() {
            return Err(GameError::NoRooms);
        }
        let mut names = BTreeSet::new();
        for r in &rooms {
            if !names.insert(r.clone()) {
                return Err(GameError::DuplicateRoom(r.clone()));
            }
        }
        let known = |r: &String| {
            if names.contains(r) {
                Ok(())
            } else {
                Err(GameError::UnknownRoom(r.clone()))
            }
        };
        let mut map: BTreeMap<(String, Direction), String> = BTreeMap::new();
        let mut insert = |from: &String, dir: Direction, to: &String| match map.get(&(from.clone(), dir)) {
            Some(existing) if existing != to => Err(GameError::ConflictingConnection { room: from.clone(), dir }),
            _ => {
                map.insert((from.clone(), dir), to.clone());
                Ok(())
            }
        };
        for (from, dir, to) in connections {
            known(&from)?;
            known(&to)?;
            insert(&from, dir, &to)?;
            insert(&to, dir.opposite(), &from)?;
        }
        let start = start.into();
        let coin_room = coin_room.into();
        known(&start)?;
        known(&coin_room)?;
        let layout = Layout { rooms, connections: map, start, coin_room };
        layout.shortest_path_len()?;
        Ok(layout)
    }

    /// Fixture: A north to B, B east to C, coin in C, start in A.
    pub fn fix_a() -> Layout {
        Layout::new(
            vec!["A".into(), "B".into(), "C".into()],
            [("A".to_string(), Direction::North, "B".to_string()), ("B".to_string(), Direction::East, "C".to_string())],
            "A",
            "C",
        )
        .expect("fixture is valid")
    }

    pub fn from_file(file: &LayoutFile) -> Result<Layout, GameError> {
        let mut conns = Vec::with_capacity(file.connections.len());
        for c in &file.connections {
            let dir =
                Direction::parse(&c.dir.to_lowercase()).ok_or_else(|| GameError::UnknownDirection(c.dir.clone()))?;
            conns.push((c.from.clone(), dir, c.to.clone()));
        }
        Layout::new(file.rooms.clone(), conns, file.start.clone(), file.coin.clone())
    }

    pub fn from_json(text: &str) -> Result<Layout, GameError> {
        let file: LayoutFile = serde_json::from_str(text).map_err(|e| GameError::Parse(e.to_string()))?;
        Layout::from_file(&file)
    }

    pub fn to_file(&self) -> LayoutFile {
        LayoutFile {
            rooms: self.rooms.clone(),
            connections: self
                .connections
                .iter()
                .map(|((from, dir), to)| ConnectionRecord { from: from.clone(), dir: dir.to_string(), to: to.clone() })
                .collect(),
            start: self.start.clone(),
            coin: self.coin_room.clone(),
        }
    }

    pub fn rooms(&self) -> &[String] {
        &self.rooms
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn coin_room(&self) -> &str {
        &self.coin_room
    }

    pub fn neighbor(&self, room: &str, dir: Direction) -> Option<&str> {
        self.connections.get(&(room.to_string(), dir)).map(String::as_str)
    }

    /// Exits of `room` in canonical direction order.
    pub fn exits(&self, room: &str) -> Vec<Direction> {
        Direction::ALL.into_iter().filter(|&d| self.neighbor(room, d).is_some()).collect()
    }

    pub fn connections(&self) -> impl Iterator<Item = (&str, Direction, &str)> + '_ {
        self.connections.iter().map(|((f, d), t)| (f.as_str(), *d, t.as_str()))
    }

    fn shortest_path_len(&self) -> Result<usize, GameError> {
        let mut dist: HashMap<&str, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(self.start.as_str(), 0);
        queue.push_back(self.start.as_str());
        while let Some(room) = queue.pop_front() {
            if room == self.coin_room {
                return Ok(dist[room]);
            }
            for d in Direction::ALL {
                if let Some(next) = self.neighbor(room, d) {
                    if !dist.contains_key(next) {
                        dist.insert(next, dist[room] + 1);
                        queue.push_back(next);
                    }
                }
            }
        }
        Err(GameError::CoinUnreachable)
    }
}

/// Shortest number of commands that wins: moves along a breadth-first
/// shortest path plus the final `take coin`.
pub fn optimal_steps(layout: &Layout) -> Result<usize, GameError> {
    layout.shortest_path_len().map(|moves| moves + 1)
}

/// Spreadsheet-style room names: A..Z, AA, AB, ...
fn room_name(mut index: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

const MAX_ATTEMPTS: usize = 10_000;

type Walk = (Vec<(i32, i32)>, Vec<Direction>);

/// Draws a self-avoiding walk of `len` moves from the origin.
fn draw_path(rng: &mut Lcg, len: usize) -> Result<Walk, GameError> {
    for _ in 0..MAX_ATTEMPTS {
        let mut path = vec![(0, 0)];
        let mut moves = Vec::with_capacity(len);
        let mut occupied = BTreeSet::from([(0, 0)]);
        while moves.len() < len {
            let here = *path.last().unwrap();
            let free: Vec<Direction> =
                Direction::ALL.into_iter().filter(|d| !occupied.contains(&d.step_from(here))).collect();
            if free.is_empty() {
                break;
            }
            let d = free[rng.pick(free.len())];
            let next = d.step_from(here);
            moves.push(d);
            path.push(next);
            occupied.insert(next);
        }
        if moves.len() == len {
            return Ok((path, moves));
        }
    }
    Err(GameError::PathGeneration)
}

/// Attaches `branches` dead ends to the drawn path, or `None` if the path
/// has too few usable sides.
fn place_branches(
    rng: &mut Lcg,
    path: &[(i32, i32)],
    moves: &[Direction],
    branches: usize,
) -> Option<Vec<(usize, Direction)>> {
    let mut occupied: BTreeSet<(i32, i32)> = path.iter().copied().collect();
    let slots = |room: usize, occupied: &BTreeSet<(i32, i32)>| -> Vec<Direction> {
        Direction::ALL
            .into_iter()
            .filter(|&d| d > moves[room] && !occupied.contains(&d.step_from(path[room])))
            .collect()
    };
    let mut used = vec![false; moves.len()];
    let mut placed = Vec::with_capacity(branches);
    for _ in 0..branches {
        let eligible: Vec<usize> = (0..moves.len()).filter(|&r| !used[r] && !slots(r, &occupied).is_empty()).collect();
        if eligible.is_empty() {
            return None;
        }
        let room = eligible[rng.pick(eligible.len())];
        let candidates = slots(room, &occupied);
        let d = candidates[rng.pick(candidates.len())];
        used[room] = true;
        occupied.insert(d.step_from(path[room]));
        placed.push((room, d));
    }
    Some(placed)
}

/// Generates a path of `chain_length` moves from the start room to the coin
/// room plus `branches` one-room dead ends, embedded in the lattice without
/// two rooms sharing a coordinate.
///
/// Every direction is chosen with [`Lcg::pick`] over the candidate sides in
/// canonical order. Each non-coin path room can carry one branch, on a side
/// that comes after the room's onward exit in canonical order; when a drawn
/// path cannot host all branches a new path is drawn from the same stream.
/// Path rooms are named A, B, ... in path order and branch rooms follow.
pub fn generate_layout(chain_length: usize, branches: usize, seed: u64) -> Result<Layout, GameError> {
    if chain_length == 0 {
        return Err(GameError::EmptyChain);
    }
    if branches > chain_length {
        return Err(GameError::TooManyBranches { requested: branches, available: chain_length });
    }
    let mut rng = Lcg::new(seed);
    for _ in 0..MAX_ATTEMPTS {
        let (path, moves) = draw_path(&mut rng, chain_length)?;
        let Some(placed) = place_branches(&mut rng, &path, &moves, branches) else { continue };

        let mut rooms: Vec<String> = (0..=chain_length).map(room_name).collect();
        let mut connections: Vec<(String, Direction, String)> =
            moves.iter().enumerate().map(|(i, &d)| (rooms[i].clone(), d, rooms[i + 1].clone())).collect();
        for (room, d) in placed {
            let name = room_name(rooms.len());
            connections.push((rooms[room].clone(), d, name.clone()));
            rooms.push(name);
        }
        let start = rooms[0].clone();
        let coin = rooms[chain_length].clone();
        return Layout::new(rooms, connections, start, coin);
    }
    Err(GameError::PathGeneration)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub text: String,
    pub reward: f64,
    pub done: bool,
    pub score: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameState {
    pub layout: Arc<Layout>,
    pub location: String,
    /// The coin is in the agent's inventory.
    pub has_coin: bool,
    pub coin_taken: bool,
    pub visited: BTreeSet<String>,
    pub steps: usize,
    pub max_steps: usize,
    pub done: bool,
    pub score: i64,
}

impl GameState {
    pub fn coin_here(&self) -> bool {
        !self.coin_taken && self.location == self.layout.coin_room()
    }
}

pub fn new_game(layout: Arc<Layout>, max_steps: usize) -> Result<(GameState, Observation), GameError> {
    if max_steps == 0 {
        return Err(GameError::ZeroMaxSteps);
    }
    let start = layout.start().to_string();
    let state = GameState {
        layout,
        location: start.clone(),
        has_coin: false,
        coin_taken: false,
        visited: BTreeSet::from([start]),
        steps: 0,
        max_steps,
        done: false,
        score: 0,
    };
    let obs = Observation { text: render_observation(&state), reward: 0.0, done: false, score: 0 };
    Ok((state, obs))
}

fn join_directions(dirs: &[Direction]) -> String {
    let names: Vec<&str> = dirs.iter().map(|d| d.as_str()).collect();
    match names.len() {
        0 => String::new(),
        1 => names[0].to_string(),
        2 => format!("{} and {}", names[0], names[1]),
        n => format!("{}, and {}", names[..n - 1].join(", "), names[n - 1]),
    }
}

/// Room description: header line, exits in canonical order, coin sentence.
pub fn render_observation(state: &GameState) -> String {
    let room = &state.location;
    let exits = state.layout.exits(room);
    let exit_sentence = match exits.len() {
        0 => "There are no exits.".to_string(),
        1 => format!("There is an exit to the {}.", exits[0]),
        _ => format!("There are exits to the {}.", join_directions(&exits)),
    };
    let mut text = format!("= Room {room} =\nYou are in room {room}. {exit_sentence}");
    if state.coin_here() {
        text.push_str(" There is a coin here.");
    }
    text
}

pub const NO_EXIT_TEXT: &str = "You can't go that way.";
pub const NO_COIN_TEXT: &str = "There is no coin here.";
pub const TAKE_COIN_TEXT: &str = "You take the coin. You win!";
pub const INVALID_COMMAND_TEXT: &str = "Sorry, I don't understand that command.";

/// Applies one command. Every call counts as a step.
pub fn step(state: &GameState, command: &ActionCommand) -> Result<(GameState, Observation), GameError> {
    if state.done {
        return Err(GameError::GameOver);
    }
    let mut next = state.clone();
    let mut reward = 0.0;
    let text = match command {
        ActionCommand::Go(d) => match state.layout.neighbor(&state.location, *d) {
            Some(room) => {
                next.location = room.to_string();
                next.visited.insert(room.to_string());
                render_observation(&next)
            }
            None => NO_EXIT_TEXT.to_string(),
        },
        ActionCommand::TakeCoin => {
            if state.coin_here() {
                next.coin_taken = true;
                next.has_coin = true;
                next.score = 1;
                reward = 1.0;
                TAKE_COIN_TEXT.to_string()
            } else {
                NO_COIN_TEXT.to_string()
            }
        }
        ActionCommand::Invalid(_) => INVALID_COMMAND_TEXT.to_string(),
    };
    next.steps += 1;
    next.done = next.coin_taken || next.steps >= next.max_steps;
    let obs = Observation { text, reward, done: next.done, score: next.score };
    Ok((next, obs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fix_a_game() -> (GameState, Observation) {
        new_game(Arc::new(Layout::fix_a()), DEFAULT_MAX_STEPS).unwrap()
    }

    #[test]
    fn opposite_is_involution() {
        for d in Direction::ALL {
            assert_eq!(d.opposite().opposite(), d);
            assert_ne!(d.opposite(), d);
        }
    }

    #[test]
    fn command_grammar() {
        assert_eq!(parse_command("Go  North"), ActionCommand::Go(Direction::North));
        assert_eq!(parse_command("  take coin "), ActionCommand::TakeCoin);
        assert_eq!(parse_command("TAKE COIN"), ActionCommand::TakeCoin);
        assert_eq!(parse_command("open mailbox"), ActionCommand::Invalid("open mailbox".into()));
        assert_eq!(parse_command("go up"), ActionCommand::Invalid("go up".into()));
        assert_eq!(parse_command(""), ActionCommand::Invalid("".into()));
    }

    #[test]
    fn fix_a_start_observation() {
        let (state, obs) = fix_a_game();
        assert_eq!(obs.text, "= Room A =\nYou are in room A. There is an exit to the north.");
        assert_eq!(state.visited, BTreeSet::from(["A".to_string()]));
        assert_eq!((state.steps, state.score, obs.score), (0, 0, 0));
    }

    #[test]
    fn zero_max_steps_rejected() {
        assert_eq!(new_game(Arc::new(Layout::fix_a()), 0), Err(GameError::ZeroMaxSteps));
    }

    #[test]
    fn walk_fix_a() {
        let (s0, _) = fix_a_game();
        let (s1, o1) = step(&s0, &ActionCommand::Go(Direction::North)).unwrap();
        assert_eq!(o1.text, "= Room B =\nYou are in room B. There are exits to the east and south.");
        assert_eq!(o1.reward, 0.0);
        let (s2, o2) = step(&s1, &ActionCommand::Go(Direction::East)).unwrap();
        assert_eq!(o2.text, "= Room C =\nYou are in room C. There is an exit to the west. There is a coin here.");
        let (s3, o3) = step(&s2, &ActionCommand::TakeCoin).unwrap();
        assert_eq!((o3.reward, o3.done, o3.score), (1.0, true, 1));
        assert!(s3.coin_taken && s3.has_coin);
        assert_eq!(step(&s3, &ActionCommand::TakeCoin), Err(GameError::GameOver));
    }

    #[test]
    fn blocked_move_and_invalid_command_are_no_ops() {
        let (s0, _) = fix_a_game();
        let (s1, o1) = step(&s0, &ActionCommand::Go(Direction::West)).unwrap();
        assert_eq!(o1.text, NO_EXIT_TEXT);
        assert_eq!(o1.reward, 0.0);
        assert_eq!(s1.location, "A");
        assert_eq!(s1.steps, 1);
        let (s2, o2) = step(&s1, &parse_command("dance")).unwrap();
        assert_eq!(o2.text, INVALID_COMMAND_TEXT);
        assert_eq!(s2.location, "A");
        let (_, o3) = step(&s2, &ActionCommand::TakeCoin).unwrap();
        assert_eq!(o3.text, NO_COIN_TEXT);
    }

    #[test]
    fn episode_ends_at_max_steps() {
        let (s0, _) = new_game(Arc::new(Layout::fix_a()), 1).unwrap();
        let (s1, o1) = step(&s0, &ActionCommand::Go(Direction::North)).unwrap();
        assert!(s1.done && o1.done);
        assert_eq!(o1.reward, 0.0);
    }

    #[test]
    fn exit_sentences() {
        assert_eq!(join_directions(&[Direction::East, Direction::South]), "east and south");
        assert_eq!(join_directions(&[Direction::North, Direction::East, Direction::West]), "north, east, and west");
    }

    #[test]
    fn room_names() {
        assert_eq!(room_name(0), "A");
        assert_eq!(room_name(25), "Z");
        assert_eq!(room_name(26), "AA");
        assert_eq!(room_name(27), "AB");
    }

    #[test]
    fn fixture_optimal_steps() {
        assert_eq!(optimal_steps(&Layout::fix_a()), Ok(3));
    }

    #[test]
    fn single_link_layout() {
        for seed in 0..20 {
            let l = generate_layout(1, 0, seed).unwrap();
            assert_eq!(l.rooms().len(), 2);
            let d = l.exits("A");
            assert_eq!(d.len(), 1);
            assert_eq!(l.neighbor("A", d[0]), Some("B"));
            assert_eq!(l.coin_room(), "B");
            assert_eq!(optimal_steps(&l), Ok(2));
        }
    }

    #[test]
    fn too_many_branches() {
        assert!(matches!(generate_layout(2, 5, 0), Err(GameError::TooManyBranches { requested: 5, .. })));
        assert_eq!(generate_layout(0, 0, 0), Err(GameError::EmptyChain));
    }

    #[test]
    fn layout_file_completes_reverse_links() {
        let json = r#"{"rooms":["X","Y"],"connections":[{"from":"X","dir":"east","to":"Y"}],"start":"X","coin":"Y"}"#;
        let l = Layout::from_json(json).unwrap();
        assert_eq!(l.neighbor("Y", Direction::West), Some("X"));
        let again = Layout::from_file(&l.to_file()).unwrap();
        assert_eq!(again, l);
    }

    #[test]
    fn layout_file_errors() {
        let bad_room = r#"{"rooms":["X"],"connections":[{"from":"X","dir":"east","to":"Q"}],"start":"X","coin":"X"}"#;
        assert_eq!(Layout::from_json(bad_room), Err(GameError::UnknownRoom("Q".into())));
        let unreachable = r#"{"rooms":["X","Y"],"connections":[],"start":"X","coin":"Y"}"#;
        assert_eq!(Layout::from_json(unreachable), Err(GameError::CoinUnreachable));
        let conflict = r#"{"rooms":["X","Y","Z"],"connections":[{"from":"X","dir":"east","to":"Y"},{"from":"X","dir":"east","to":"Z"}],"start":"X","coin":"Y"}"#;
        assert!(matches!(Layout::from_json(conflict), Err(GameError::ConflictingConnection { .. })));
        let bad_dir = r#"{"rooms":["X","Y"],"connections":[{"from":"X","dir":"up","to":"Y"}],"start":"X","coin":"Y"}"#;
        assert_eq!(Layout::from_json(bad_dir), Err(GameError::UnknownDirection("up".into())));
    }
}
