//! Per-player information sets and card counting.

mod curve;
mod mask;
mod prob;
mod view;

pub use curve::{GiveUpCurve, FULL_DECK_AFTER_DEAL};
pub use mask::PossibleMask;
pub use prob::{deficit, is_endangered, is_playable, is_unneeded, mask_fraction};
pub use view::{apply_clue, single_out_target, CardKnowledge, KnowledgeSummary, PlayerView, VisibleCard};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KnowledgeError {
    #[error("view out of sync with event: {0}")]
    Desync(String),
    #[error("slot {0} is not in the hand")]
    SlotOutOfRange(usize),
    #[error("no unseen card matches the knowledge of slot {0}")]
    EmptyMatchingSet(usize),
    #[error("deck size {0} outside 0..=40")]
    DeckSizeOutOfRange(usize),
    #[error("invalid give-up curve: {0}")]
    InvalidCurve(String),
}

/// Pure form of [`PlayerView::apply_event`].
pub fn update_knowledge(view: &PlayerView, event: &crate::engine::ResolvedEvent) -> Result<PlayerView, KnowledgeError> {
    view.updated(event)
}
