//! Card-counting probabilities over the viewer's unseen multiset.
//!
//! Each probability is `#(unseen identities matching the slot's clue mask that
//! satisfy the predicate) / #(unseen identities matching the mask)`, kept as an
//! exact rational.

use super::curve::GiveUpCurve;
use super::mask::PossibleMask;
use super::view::PlayerView;
use super::KnowledgeError;
use crate::engine::{Card, NUM_COLORS, NUM_IDENTITIES};
use crate::{Prob, Scalar};

/// Rank minus the firework height of its color, floored at 0.
pub fn deficit(card: Card, fireworks: &[u8; NUM_COLORS]) -> u8 {
    card.rank().saturating_sub(fireworks[card.color().index()])
}

pub fn is_playable(card: Card, fireworks: &[u8; NUM_COLORS]) -> bool {
    deficit(card, fireworks) == 1
}

/// Not yet played, and exactly one copy remains outside the discard pile.
pub fn is_endangered(card: Card, fireworks: &[u8; NUM_COLORS], discards: &[u8; NUM_IDENTITIES]) -> bool {
    card.rank() > fireworks[card.color().index()] && card.copies() - discards[card.id()] == 1
}

/// Can never be played: already covered, a lower rank of its color is gone
/// from the game, or its deficit exceeds the give-up threshold.
pub fn is_unneeded<T: Scalar>(
    card: Card,
    fireworks: &[u8; NUM_COLORS],
    discards: &[u8; NUM_IDENTITIES],
    threshold: T,
) -> bool {
    let height = fireworks[card.color().index()];
    if card.rank() <= height {
        return true;
    }
    let blocked = (height + 1..card.rank()).any(|r| {
        let lower = Card::new(card.color(), r);
        discards[lower.id()] == lower.copies()
    });
    blocked || T::lit(f64::from(deficit(card, fireworks))) > threshold
}

/// Fraction of the unseen cards in `mask` that satisfy `pred`.
pub fn mask_fraction(mask: PossibleMask, unseen: &[u8; NUM_IDENTITIES], pred: impl Fn(Card) -> bool) -> Option<Prob> {
    let (mut hits, mut total) = (0u32, 0u32);
    for card in mask.cards() {
        let n = u32::from(unseen[card.id()]);
        total += n;
        if pred(card) {
            hits += n;
        }
    }
    (total > 0).then(|| Prob::new(hits, total))
}

impl PlayerView {
    fn own_fraction(&self, slot: usize, pred: impl Fn(Card) -> bool) -> Result<Prob, KnowledgeError> {
        let k = self.own_hand().get(slot).ok_or(KnowledgeError::SlotOutOfRange(slot))?;
        mask_fraction(k.possible, &self.unseen_counts(), pred).ok_or(KnowledgeError::EmptyMatchingSet(slot))
    }

    pub fn prob_playable(&self, slot: usize) -> Result<Prob, KnowledgeError> {
        let fw = *self.fireworks();
        self.own_fraction(slot, |c| is_playable(c, &fw))
    }

    pub fn prob_non_endangered(&self, slot: usize) -> Result<Prob, KnowledgeError> {
        let fw = *self.fireworks();
        let dc = *self.discard_counts();
        self.own_fraction(slot, |c| !is_endangered(c, &fw, &dc))
    }

    pub fn prob_unneeded<T: Scalar>(&self, slot: usize, curve: &GiveUpCurve<T>) -> Result<Prob, KnowledgeError> {
        let threshold = curve.threshold(self.deck_size())?;
        let fw = *self.fireworks();
        let dc = *self.discard_counts();
        self.own_fraction(slot, |c| is_unneeded(c, &fw, &dc, threshold))
    }
}
