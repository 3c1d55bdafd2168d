use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::action::{Action, Hint, Player, SlotMask};
use super::card::{full_counts, Card, DECK_SIZE, NUM_COLORS, NUM_IDENTITIES};
use super::rules::{RulesConfig, StrikeOut, MAX_INFO_TOKENS, MAX_STRIKES, NUM_PLAYERS};
use super::{EngineError, IllegalAction};

/// Card drawn after a play or discard, as seen by some observer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Draw {
    /// The deck was empty.
    None,
    Card(Card),
    /// A card was drawn into the observer's own hand.
    Hidden,
}

impl Draw {
    pub fn happened(self) -> bool {
        !matches!(self, Draw::None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Outcome {
    Play { card: Card, success: bool, drawn: Draw },
    Discard { card: Card, drawn: Draw },
    Clue { touched: SlotMask },
}

/// A transition as it happened.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedEvent {
    pub turn: u32,
    pub player: Player,
    pub action: Action,
    pub outcome: Outcome,
}

impl ResolvedEvent {
    /// The event as `viewer` sees it: a card drawn into the viewer's own hand is hidden.
    pub fn redacted_for(&self, viewer: Player) -> ResolvedEvent {
        let mut event = *self;
        if self.player == viewer {
            match &mut event.outcome {
                Outcome::Play { drawn, .. } | Outcome::Discard { drawn, .. } => {
                    if drawn.happened() {
                        *drawn = Draw::Hidden;
                    }
                }
                Outcome::Clue { .. } => {}
            }
        }
        event
    }
}

/// Shuffles the standard deck with ChaCha8 seeded by `seed_from_u64` and a
/// Fisher-Yates pass from the back, drawing indices with the multiply-shift map
/// `(u64 * (i + 1)) >> 64`. Returned in draw order.
pub fn shuffled_deck(seed: u64) -> Vec<Card> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deck = Card::full_deck();
    for i in (1..deck.len()).rev() {
        let j = ((u128::from(rng.next_u64()) * (i as u128 + 1)) >> 64) as usize;
        deck.swap(i, j);
    }
    deck
}

/// A full deck in draw order that starts with `prefix` and continues with the
/// remaining cards in identity order. Useful for staging hands.
pub fn deck_with_prefix(prefix: &[Card]) -> Result<Vec<Card>, EngineError> {
    let mut rest = Card::full_deck();
    let mut order = Vec::with_capacity(DECK_SIZE);
    for &c in prefix {
        let pos =
            rest.iter().position(|&x| x == c).ok_or_else(|| EngineError::Deck(format!("too many copies of {c}")))?;
        order.push(rest.remove(pos));
    }
    order.extend(rest);
    Ok(order)
}

/// Full ground-truth position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    config: RulesConfig,
    seed: u64,
    deck_order: Vec<Card>,
    hands: [Vec<Card>; NUM_PLAYERS],
    /// Undrawn cards, next card last.
    deck: Vec<Card>,
    fireworks: [u8; NUM_COLORS],
    info_tokens: u8,
    strikes: u8,
    discards: Vec<Card>,
    current_player: Player,
    turns_after_deck_empty: u8,
    history: Vec<ResolvedEvent>,
}

impl GameState {
    pub fn new(seed: u64, config: RulesConfig) -> Result<GameState, EngineError> {
        config.validate()?;
        GameState::with_deck(shuffled_deck(seed), seed, config)
    }

    /// Starts from an explicit deck in draw order. `seed` is only recorded.
    pub fn with_deck(deck_order: Vec<Card>, seed: u64, config: RulesConfig) -> Result<GameState, EngineError> {
        config.validate()?;
        if deck_order.len() != DECK_SIZE {
            return Err(EngineError::Deck(format!("expected {DECK_SIZE} cards, got {}", deck_order.len())));
        }
        let mut counts = [0u8; NUM_IDENTITIES];
        for c in &deck_order {
            counts[c.id()] += 1;
        }
        if counts != full_counts() {
            return Err(EngineError::Deck("deck is not the standard 50-card multiset".into()));
        }
        let mut deck: Vec<Card> = deck_order.iter().rev().copied().collect();
        let mut hands: [Vec<Card>; NUM_PLAYERS] = Default::default();
        for hand in &mut hands {
            for _ in 0..config.hand_size {
                hand.push(deck.pop().expect("deck holds enough cards to deal"));
            }
        }
        Ok(GameState {
            config,
            seed,
            deck_order,
            hands,
            deck,
            fireworks: [0; NUM_COLORS],
            info_tokens: MAX_INFO_TOKENS,
            strikes: 0,
            discards: Vec::new(),
            current_player: 0,
            turns_after_deck_empty: 0,
            history: Vec::new(),
        })
    }

    pub fn config(&self) -> &RulesConfig {
        &self.config
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The deck as shuffled, in draw order, including the dealt cards.
    pub fn deck_order(&self) -> &[Card] {
        &self.deck_order
    }

    pub fn hand(&self, player: Player) -> &[Card] {
        &self.hands[player]
    }

    /// Undrawn cards, next card first.
    pub fn deck(&self) -> impl Iterator<Item = Card> + '_ {
        self.deck.iter().rev().copied()
    }

    pub fn deck_size(&self) -> usize {
        self.deck.len()
    }

    pub fn fireworks(&self) -> &[u8; NUM_COLORS] {
        &self.fireworks
    }

    pub fn info_tokens(&self) -> u8 {
        self.info_tokens
    }

    pub fn strikes(&self) -> u8 {
        self.strikes
    }

    pub fn discards(&self) -> &[Card] {
        &self.discards
    }

    pub fn current_player(&self) -> Player {
        self.current_player
    }

    pub fn turns_after_deck_empty(&self) -> u8 {
        self.turns_after_deck_empty
    }

    pub fn history(&self) -> &[ResolvedEvent] {
        &self.history
    }

    pub fn turn(&self) -> u32 {
        self.history.len() as u32
    }

    /// Sum of firework heights.
    pub fn score(&self) -> u32 {
        self.fireworks.iter().map(|&f| u32::from(f)).sum()
    }

    /// Score as reported at the end of the game, honoring the strike-out rule.
    pub fn final_score(&self) -> u32 {
        if self.strikes >= MAX_STRIKES && self.config.strike_out == StrikeOut::Zero {
            0
        } else {
            self.score()
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.strikes >= MAX_STRIKES
            || self.fireworks.iter().all(|&f| f == 5)
            || usize::from(self.turns_after_deck_empty) >= NUM_PLAYERS
    }

    pub fn is_playable(&self, card: Card) -> bool {
        self.fireworks[card.color().index()] + 1 == card.rank()
    }

    /// Legal moves in canonical order: plays by slot, discards by slot, color
    /// clues, rank clues.
    pub fn legal_actions(&self) -> Result<Vec<Action>, EngineError> {
        if self.is_terminal() {
            return Err(EngineError::Terminal);
        }
        let me = self.current_player;
        let slots = self.hands[me].len();
        let mut actions = Vec::with_capacity(20);
        actions.extend((0..slots).map(Action::Play));
        if self.info_tokens < MAX_INFO_TOKENS {
            actions.extend((0..slots).map(Action::Discard));
        }
        if self.info_tokens > 0 {
            let target = 1 - me;
            let hand = &self.hands[target];
            actions.extend(
                Hint::all().filter(|h| hand.iter().any(|&c| h.matches(c))).map(|hint| Action::Clue { target, hint }),
            );
        }
        Ok(actions)
    }

    /// Why `action` cannot be taken now, if it cannot.
    pub fn check(&self, action: Action) -> Result<(), IllegalAction> {
        if self.is_terminal() {
            return Err(IllegalAction::GameOver);
        }
        let me = self.current_player;
        match action {
            Action::Play(slot) | Action::Discard(slot) => {
                let hand_len = self.hands[me].len();
                if slot >= hand_len {
                    return Err(IllegalAction::SlotOutOfRange { slot, hand_len });
                }
                if matches!(action, Action::Discard(_)) && self.info_tokens >= MAX_INFO_TOKENS {
                    return Err(IllegalAction::DiscardAtMaxTokens);
                }
            }
            Action::Clue { target, hint } => {
                if target >= NUM_PLAYERS {
                    return Err(IllegalAction::UnknownTarget(target));
                }
                if target == me {
                    return Err(IllegalAction::ClueToSelf);
                }
                if self.info_tokens == 0 {
                    return Err(IllegalAction::NoInfoTokens);
                }
                if !self.hands[target].iter().any(|&c| hint.matches(c)) {
                    return Err(IllegalAction::ClueTouchesNothing);
                }
            }
        }
        Ok(())
    }

    /// Pure transition.
    pub fn apply_action(&self, action: Action) -> Result<(GameState, ResolvedEvent), EngineError> {
        let mut next = self.clone();
        let event = next.apply(action)?;
        Ok((next, event))
    }

    /// In-place transition. On error the state is unchanged.
    pub fn apply(&mut self, action: Action) -> Result<ResolvedEvent, EngineError> {
        self.check(action)?;
        let me = self.current_player;
        let deck_was_empty = self.deck.is_empty();
        let outcome = match action {
            Action::Play(slot) => {
                let card = self.hands[me].remove(slot);
                let success = self.is_playable(card);
                if success {
                    self.fireworks[card.color().index()] += 1;
                    if card.rank() == 5 && self.info_tokens < MAX_INFO_TOKENS {
                        self.info_tokens += 1;
                    }
                } else {
                    self.strikes += 1;
                    self.discards.push(card);
                }
                Outcome::Play { card, success, drawn: self.draw(me) }
            }
            Action::Discard(slot) => {
                let card = self.hands[me].remove(slot);
                self.discards.push(card);
                self.info_tokens += 1;
                Outcome::Discard { card, drawn: self.draw(me) }
            }
            Action::Clue { target, hint } => {
                self.info_tokens -= 1;
                let touched = SlotMask::from_slots(
                    self.hands[target].iter().enumerate().filter(|(_, &c)| hint.matches(c)).map(|(i, _)| i),
                );
                Outcome::Clue { touched }
            }
        };
        if deck_was_empty {
            self.turns_after_deck_empty += 1;
        }
        let event = ResolvedEvent { turn: self.turn(), player: me, action, outcome };
        self.history.push(event);
        self.current_player = 1 - me;
        Ok(event)
    }

    fn draw(&mut self, player: Player) -> Draw {
        match self.deck.pop() {
            Some(card) => {
                self.hands[player].push(card);
                Draw::Card(card)
            }
            None => Draw::None,
        }
    }

    /// Per-identity counts across hands, deck, discards and fireworks.
    pub fn zone_counts(&self) -> [u8; NUM_IDENTITIES] {
        let mut counts = [0u8; NUM_IDENTITIES];
        let cards = self.hands.iter().flatten().chain(&self.deck).chain(&self.discards);
        for c in cards {
            counts[c.id()] += 1;
        }
        for (color, &height) in self.fireworks.iter().enumerate() {
            for rank in 1..=height {
                counts[color * 5 + usize::from(rank - 1)] += 1;
            }
        }
        counts
    }
}
