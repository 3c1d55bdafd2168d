//! Deterministic two-player Hanabi rules.

mod action;
mod card;
mod log;
mod rules;
mod state;

pub use action::{Action, ActionKind, Hint, ParseActionError, Player, SlotMask};
pub use card::{
    full_counts, Card, Color, ParseCardError, COPIES_PER_RANK, DECK_SIZE, NUM_COLORS, NUM_IDENTITIES, NUM_RANKS,
};
pub use log::{replay, GameLog, LOG_FORMAT, LOG_VERSION};
pub use rules::{RulesConfig, StrikeOut, MAX_INFO_TOKENS, MAX_SCORE, MAX_STRIKES, NUM_PLAYERS, STANDARD_HAND_SIZE};
pub use state::{deck_with_prefix, shuffled_deck, Draw, GameState, Outcome, ResolvedEvent};

/// Reason an action was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum IllegalAction {
    #[error("game is over")]
    GameOver,
    #[error("slot {slot} out of range for hand of {hand_len}")]
    SlotOutOfRange { slot: usize, hand_len: usize },
    #[error("cannot discard with all information tokens available")]
    DiscardAtMaxTokens,
    #[error("no information tokens left")]
    NoInfoTokens,
    #[error("cannot clue yourself")]
    ClueToSelf,
    #[error("no player {0}")]
    UnknownTarget(usize),
    #[error("clue touches no card")]
    ClueTouchesNothing,
}

impl IllegalAction {
    /// Stable machine-readable reason code.
    pub fn code(self) -> &'static str {
        match self {
            IllegalAction::GameOver => "game_over",
            IllegalAction::SlotOutOfRange { .. } => "slot_out_of_range",
            IllegalAction::DiscardAtMaxTokens => "discard_at_max_tokens",
            IllegalAction::NoInfoTokens => "no_info_tokens",
            IllegalAction::ClueToSelf => "clue_to_self",
            IllegalAction::UnknownTarget(_) => "unknown_target",
            IllegalAction::ClueTouchesNothing => "clue_touches_nothing",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid deck: {0}")]
    Deck(String),
    #[error("illegal action: {0}")]
    Illegal(#[from] IllegalAction),
    #[error("game is over")]
    Terminal,
    #[error("replay failed at action {index}: {source}")]
    Replay { index: usize, source: Box<EngineError> },
    #[error("game log line {line}: {message}")]
    Log { line: usize, message: String },
}
