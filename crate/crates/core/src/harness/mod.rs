//! Simulation, statistics, decision capture and humanness.

mod crossplay;
mod db;
mod sim;
mod stats;

pub use crossplay::{crossplay_matrix, CrossplayMatrix};
pub use db::{
    capture_decisions, evaluate_humanness, DecisionDb, DecisionRecord, HumannessReport, PreparedDb, RecordMatch,
    DB_FORMAT, DB_VERSION,
};
pub use sim::{a_moves_first, game_seed, play_game, simulate_games, simulate_scores, SimulationOutput, Table};
pub use stats::{bootstrap_ci95, MatchStats, Z95};

use crate::decision::DecisionError;
use crate::engine::EngineError;
use crate::knowledge::KnowledgeError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
    #[error("game with seed {seed}: {source}")]
    Game { seed: u64, source: Box<HarnessError> },
    #[error("decision failed in game with seed {seed}: {source}")]
    Decision { seed: u64, source: DecisionError },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    fn with_seed(self, seed: u64) -> HarnessError {
        match self {
            e @ (HarnessError::Game { .. } | HarnessError::Decision { .. }) => e,
            e => HarnessError::Game { seed, source: Box::new(e) },
        }
    }
}
