use serde::{Deserialize, Serialize};

use super::mask::PossibleMask;
use super::KnowledgeError;
use crate::engine::{
    full_counts, Action, Card, Draw, GameState, Hint, Outcome, Player, ResolvedEvent, SlotMask, MAX_INFO_TOKENS,
    MAX_STRIKES, NUM_COLORS, NUM_IDENTITIES, NUM_PLAYERS,
};

/// What is publicly known about one card in a hand, from clues alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CardKnowledge {
    pub possible: PossibleMask,
    pub singled_out: bool,
    /// Touched by at least one clue.
    pub clued: bool,
    /// Turn on which the card entered the hand (0 for the deal).
    pub drawn_turn: u32,
}

impl CardKnowledge {
    pub fn fresh(drawn_turn: u32) -> CardKnowledge {
        CardKnowledge { possible: PossibleMask::ALL, singled_out: false, clued: false, drawn_turn }
    }

    pub fn known_color(&self) -> Option<crate::engine::Color> {
        self.possible.known_color()
    }

    pub fn known_rank(&self) -> Option<u8> {
        self.possible.known_rank()
    }

    fn knows(&self, hint: Hint) -> bool {
        match hint {
            Hint::Color(c) => self.known_color() == Some(c),
            Hint::Rank(r) => self.known_rank() == Some(r),
        }
    }
}

/// A teammate card: identity visible to the viewer, plus the teammate's knowledge of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VisibleCard {
    pub card: Card,
    pub knowledge: CardKnowledge,
}

/// The slot a clue singles out: among touched slots whose clued attribute was
/// not already known, the unique one, if exactly one qualifies.
pub fn single_out_target(hand: &[CardKnowledge], touched: SlotMask, hint: Hint) -> Option<usize> {
    let mut learners = touched.iter().filter(|&s| s < hand.len() && !hand[s].knows(hint));
    match (learners.next(), learners.next()) {
        (Some(s), None) => Some(s),
        _ => None,
    }
}

/// Applies a clue to a hand's knowledge in place, including the singled-out flag.
pub fn apply_clue(hand: &mut [CardKnowledge], touched: SlotMask, hint: Hint) -> Result<(), KnowledgeError> {
    if touched.iter().any(|s| s >= hand.len()) || touched.is_empty() {
        return Err(KnowledgeError::Desync(format!("clue touches invalid slots {:#b}", touched.0)));
    }
    let singled = single_out_target(hand, touched, hint);
    for (slot, k) in hand.iter_mut().enumerate() {
        k.possible = k.possible.apply_hint(hint, touched.contains(slot));
        k.clued |= touched.contains(slot);
        if k.possible.is_empty() {
            return Err(KnowledgeError::Desync(format!("clue {hint} empties slot {slot}")));
        }
    }
    if let Some(target) = singled {
        for (slot, k) in hand.iter_mut().enumerate() {
            k.singled_out = slot == target;
        }
    }
    Ok(())
}

/// One player's information set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayerView {
    viewer: Player,
    own: Vec<CardKnowledge>,
    teammate: Vec<VisibleCard>,
    fireworks: [u8; NUM_COLORS],
    discards: Vec<Card>,
    discard_counts: [u8; NUM_IDENTITIES],
    info_tokens: u8,
    strikes: u8,
    deck_size: usize,
    turns_after_deck_empty: u8,
    current_player: Player,
    turn: u32,
    history: Vec<ResolvedEvent>,
}

impl PlayerView {
    /// View at the deal, before any action.
    pub fn initial(viewer: Player, own_hand_size: usize, teammate_hand: &[Card], deck_size: usize) -> PlayerView {
        PlayerView {
            viewer,
            own: vec![CardKnowledge::fresh(0); own_hand_size],
            teammate: teammate_hand
                .iter()
                .map(|&card| VisibleCard { card, knowledge: CardKnowledge::fresh(0) })
                .collect(),
            fireworks: [0; NUM_COLORS],
            discards: Vec::new(),
            discard_counts: [0; NUM_IDENTITIES],
            info_tokens: MAX_INFO_TOKENS,
            strikes: 0,
            deck_size,
            turns_after_deck_empty: 0,
            current_player: 0,
            turn: 0,
            history: Vec::new(),
        }
    }

    /// Reconstructs `viewer`'s view of `state` by replaying its history from the deal.
    pub fn observe(state: &GameState, viewer: Player) -> PlayerView {
        let hand_size = state.config().hand_size;
        let teammate = 1 - viewer;
        let dealt = &state.deck_order()[teammate * hand_size..(teammate + 1) * hand_size];
        let deck_after_deal = state.deck_order().len() - NUM_PLAYERS * hand_size;
        let mut view = PlayerView::initial(viewer, hand_size, dealt, deck_after_deal);
        for event in state.history() {
            view.apply_event(event).expect("engine history is consistent with the deal");
        }
        view
    }

    pub fn viewer(&self) -> Player {
        self.viewer
    }

    pub fn teammate_seat(&self) -> Player {
        1 - self.viewer
    }

    pub fn own_hand(&self) -> &[CardKnowledge] {
        &self.own
    }

    pub fn teammate_hand(&self) -> &[VisibleCard] {
        &self.teammate
    }

    pub fn fireworks(&self) -> &[u8; NUM_COLORS] {
        &self.fireworks
    }

    pub fn discards(&self) -> &[Card] {
        &self.discards
    }

    pub fn discard_counts(&self) -> &[u8; NUM_IDENTITIES] {
        &self.discard_counts
    }

    pub fn info_tokens(&self) -> u8 {
        self.info_tokens
    }

    pub fn strikes(&self) -> u8 {
        self.strikes
    }

    pub fn deck_size(&self) -> usize {
        self.deck_size
    }

    pub fn current_player(&self) -> Player {
        self.current_player
    }

    pub fn turn(&self) -> u32 {
        self.turn
    }

    pub fn history(&self) -> &[ResolvedEvent] {
        &self.history
    }

    pub fn score(&self) -> u32 {
        self.fireworks.iter().map(|&f| u32::from(f)).sum()
    }

    pub fn is_terminal(&self) -> bool {
        self.strikes >= MAX_STRIKES
            || self.fireworks.iter().all(|&f| f == 5)
            || usize::from(self.turns_after_deck_empty) >= NUM_PLAYERS
    }

    pub fn is_playable(&self, card: Card) -> bool {
        self.fireworks[card.color().index()] + 1 == card.rank()
    }

    /// Counts of identities the viewer cannot see: the full deck minus the
    /// teammate's hand, the discard pile and the fireworks. Sums to
    /// `deck_size + own_hand().len()`.
    pub fn unseen_counts(&self) -> [u8; NUM_IDENTITIES] {
        let mut counts = self.public_unseen_counts();
        for v in &self.teammate {
            counts[v.card.id()] -= 1;
        }
        counts
    }

    /// Full deck minus discards and fireworks.
    pub fn public_unseen_counts(&self) -> [u8; NUM_IDENTITIES] {
        let mut counts = full_counts();
        for (i, d) in self.discard_counts.iter().enumerate() {
            counts[i] -= d;
        }
        for (color, &height) in self.fireworks.iter().enumerate() {
            for rank in 0..usize::from(height) {
                counts[color * 5 + rank] -= 1;
            }
        }
        counts
    }

    /// Legal actions for the viewer in canonical engine order; empty when it is
    /// not the viewer's turn or the game is over.
    pub fn legal_actions(&self) -> Vec<Action> {
        if self.current_player != self.viewer || self.is_terminal() {
            return Vec::new();
        }
        let slots = self.own.len();
        let mut actions: Vec<Action> = (0..slots).map(Action::Play).collect();
        if self.info_tokens < MAX_INFO_TOKENS {
            actions.extend((0..slots).map(Action::Discard));
        }
        if self.info_tokens > 0 {
            let target = self.teammate_seat();
            actions.extend(
                Hint::all()
                    .filter(|h| self.teammate.iter().any(|v| h.matches(v.card)))
                    .map(|hint| Action::Clue { target, hint }),
            );
        }
        actions
    }

    /// Slots of the teammate's hand a clue would touch.
    pub fn touched_by(&self, hint: Hint) -> SlotMask {
        SlotMask::from_slots(self.teammate.iter().enumerate().filter(|(_, v)| hint.matches(v.card)).map(|(i, _)| i))
    }

    /// Knowledge after `event`, without mutating `self`.
    pub fn updated(&self, event: &ResolvedEvent) -> Result<PlayerView, KnowledgeError> {
        let mut next = self.clone();
        next.apply_event(event)?;
        Ok(next)
    }

    /// Folds an engine event into the view. Cards drawn into the viewer's own hand
    /// are never recorded, even if the event carries them.
    pub fn apply_event(&mut self, event: &ResolvedEvent) -> Result<(), KnowledgeError> {
        let desync = |msg: String| Err(KnowledgeError::Desync(msg));
        if event.turn != self.turn {
            return desync(format!("event for turn {} applied at turn {}", event.turn, self.turn));
        }
        if event.player != self.current_player {
            return desync(format!("player {} acted on player {}'s turn", event.player, self.current_player));
        }
        if self.is_terminal() {
            return desync("event after the end of the game".into());
        }
        let event = event.redacted_for(self.viewer);
        let mine = event.player == self.viewer;
        let deck_was_empty = self.deck_size == 0;

        match (event.action, event.outcome) {
            (Action::Play(slot), Outcome::Play { card, success, drawn }) => {
                self.remove_slot(mine, slot, card)?;
                if success != self.is_playable(card) {
                    return desync(format!("play of {card} reported success={success}"));
                }
                if success {
                    self.fireworks[card.color().index()] += 1;
                    if card.rank() == 5 && self.info_tokens < MAX_INFO_TOKENS {
                        self.info_tokens += 1;
                    }
                } else {
                    self.strikes += 1;
                    self.push_discard(card);
                }
                self.receive(mine, drawn)?;
            }
            (Action::Discard(slot), Outcome::Discard { card, drawn }) => {
                if self.info_tokens >= MAX_INFO_TOKENS {
                    return desync("discard at max tokens".into());
                }
                self.remove_slot(mine, slot, card)?;
                self.push_discard(card);
                self.info_tokens += 1;
                self.receive(mine, drawn)?;
            }
            (Action::Clue { target, hint }, Outcome::Clue { touched }) => {
                if target == event.player || target >= NUM_PLAYERS {
                    return desync(format!("bad clue target {target}"));
                }
                if self.info_tokens == 0 {
                    return desync("clue without tokens".into());
                }
                self.info_tokens -= 1;
                if target == self.viewer {
                    apply_clue(&mut self.own, touched, hint)?;
                } else {
                    if self.touched_by(hint) != touched {
                        return desync(format!("clue {hint} touched {:#b}", touched.0));
                    }
                    let mut hand: Vec<CardKnowledge> = self.teammate.iter().map(|v| v.knowledge).collect();
                    apply_clue(&mut hand, touched, hint)?;
                    for (v, k) in self.teammate.iter_mut().zip(hand) {
                        v.knowledge = k;
                    }
                }
            }
            _ => return desync(format!("outcome does not match action {}", event.action)),
        }

        if deck_was_empty {
            self.turns_after_deck_empty += 1;
        }
        self.turn += 1;
        self.current_player = 1 - self.current_player;
        self.history.push(event);
        Ok(())
    }

    fn remove_slot(&mut self, mine: bool, slot: usize, card: Card) -> Result<(), KnowledgeError> {
        if mine {
            if slot >= self.own.len() {
                return Err(KnowledgeError::SlotOutOfRange(slot));
            }
            if !self.own[slot].possible.contains(card) {
                return Err(KnowledgeError::Desync(format!("revealed {card} contradicts clues on slot {slot}")));
            }
            self.own.remove(slot);
        } else {
            if slot >= self.teammate.len() {
                return Err(KnowledgeError::SlotOutOfRange(slot));
            }
            if self.teammate[slot].card != card {
                return Err(KnowledgeError::Desync(format!(
                    "teammate slot {slot} holds {}, event says {card}",
                    self.teammate[slot].card
                )));
            }
            self.teammate.remove(slot);
        }
        Ok(())
    }

    fn push_discard(&mut self, card: Card) {
        self.discards.push(card);
        self.discard_counts[card.id()] += 1;
    }

    fn receive(&mut self, mine: bool, drawn: Draw) -> Result<(), KnowledgeError> {
        match (mine, drawn) {
            (_, Draw::None) => {
                if self.deck_size != 0 {
                    return Err(KnowledgeError::Desync("no draw with cards left in the deck".into()));
                }
                return Ok(());
            }
            (true, _) => self.own.push(CardKnowledge::fresh(self.turn + 1)),
            (false, Draw::Card(card)) => {
                self.teammate.push(VisibleCard { card, knowledge: CardKnowledge::fresh(self.turn + 1) })
            }
            (false, Draw::Hidden) => return Err(KnowledgeError::Desync("teammate draw hidden from viewer".into())),
        }
        if self.deck_size == 0 {
            return Err(KnowledgeError::Desync("draw from an empty deck".into()));
        }
        self.deck_size -= 1;
        Ok(())
    }

    /// Rebuilds the knowledge-free parts from a state for tests and tools that
    /// need to stage a position. Hands keep their current knowledge where the
    /// lengths agree.
    pub fn with_public_state(
        mut self,
        fireworks: [u8; NUM_COLORS],
        discards: Vec<Card>,
        info_tokens: u8,
        strikes: u8,
        deck_size: usize,
    ) -> PlayerView {
        self.fireworks = fireworks;
        self.discard_counts = [0; NUM_IDENTITIES];
        for c in &discards {
            self.discard_counts[c.id()] += 1;
        }
        self.discards = discards;
        self.info_tokens = info_tokens;
        self.strikes = strikes;
        self.deck_size = deck_size;
        self
    }

    /// Replaces the knowledge of an own-hand slot.
    pub fn set_own_knowledge(&mut self, slot: usize, knowledge: CardKnowledge) {
        self.own[slot] = knowledge;
    }

    /// Replaces the teammate's knowledge of one of their cards.
    pub fn set_teammate_knowledge(&mut self, slot: usize, knowledge: CardKnowledge) {
        self.teammate[slot].knowledge = knowledge;
    }
}

/// Wire-friendly snapshot of a card's knowledge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeSummary {
    pub possible: Vec<Card>,
    pub known_color: Option<crate::engine::Color>,
    pub known_rank: Option<u8>,
    pub singled_out: bool,
    pub clued: bool,
    pub drawn_turn: u32,
}

impl From<&CardKnowledge> for KnowledgeSummary {
    fn from(k: &CardKnowledge) -> Self {
        KnowledgeSummary {
            possible: k.possible.cards().collect(),
            known_color: k.known_color(),
            known_rank: k.known_rank(),
            singled_out: k.singled_out,
            clued: k.clued,
            drawn_turn: k.drawn_turn,
        }
    }
}
