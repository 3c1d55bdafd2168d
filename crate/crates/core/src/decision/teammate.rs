//! Model of the teammate as a copy of the agent with its own knowledge.
//!
//! The teammate is assumed to play slot `i` with probability equal to the chance,
//! from their side, that the card is playable, and to discard it with the chance
//! that it is not endangered. The two are not normalized against each other.

use super::DecisionError;
use crate::engine::{Hint, NUM_IDENTITIES};
use crate::knowledge::{apply_clue, is_endangered, is_playable, mask_fraction, CardKnowledge, PlayerView};
use crate::Prob;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeammateModel {
    /// Knowledge the teammate holds, after the hypothetical clue if any.
    pub knowledge: Vec<CardKnowledge>,
    pub play: Vec<Prob>,
    pub discard: Vec<Prob>,
}

/// What the viewer can say about the teammate's unseen multiset: everything
/// not discarded or played, minus the viewer's own cards whose identity the
/// viewer has pinned down. The teammate's own hand stays in the pool.
pub fn teammate_unseen_estimate(view: &PlayerView) -> [u8; NUM_IDENTITIES] {
    let mut counts = view.public_unseen_counts();
    for k in view.own_hand() {
        if let Some(card) = k.possible.known_card() {
            counts[card.id()] = counts[card.id()].saturating_sub(1);
        }
    }
    counts
}

pub fn teammate_play_probs(view: &PlayerView, hypothetical: Option<Hint>) -> Result<TeammateModel, DecisionError> {
    let mut knowledge: Vec<CardKnowledge> = view.teammate_hand().iter().map(|v| v.knowledge).collect();
    if let Some(hint) = hypothetical {
        let touched = view.touched_by(hint);
        if touched.is_empty() {
            return Err(DecisionError::Illegal(crate::engine::Action::Clue { target: view.teammate_seat(), hint }));
        }
        apply_clue(&mut knowledge, touched, hint)?;
    }
    let unseen = teammate_unseen_estimate(view);
    let fw = *view.fireworks();
    let dc = *view.discard_counts();
    let mut play = Vec::with_capacity(knowledge.len());
    let mut discard = Vec::with_capacity(knowledge.len());
    for (slot, k) in knowledge.iter().enumerate() {
        let empty = || crate::knowledge::KnowledgeError::EmptyMatchingSet(slot);
        play.push(mask_fraction(k.possible, &unseen, |c| is_playable(c, &fw)).ok_or_else(empty)?);
        discard.push(mask_fraction(k.possible, &unseen, |c| !is_endangered(c, &fw, &dc)).ok_or_else(empty)?);
    }
    Ok(TeammateModel { knowledge, play, discard })
}
