//! Neuro-symbolic action selection for text-based games.
//!
//! The crate is organised bottom-up:
//!
//! - [`lnn`]: propositional weighted real-valued logic network with truth
//!   bounds, bidirectional inference, contradiction loss and training.
//! - [`rulebook`]: rule templates grounded into [`lnn::LnnGraph`]s.
//! - [`game`]: a deterministic coin-collector text game.
//! - [`parser`]: observation text to logical facts, plus the spatial tracker.
//! - [`agent`]: the logic-network agent, random and tabular-Q baselines, and
//!   the episode/training harness.

pub mod agent;
pub mod game;
pub mod lnn;
pub mod parser;
pub mod rng;
pub mod rulebook;
