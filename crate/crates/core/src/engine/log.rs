//! Line-oriented game log.
//!
//! ```text
//! cyclone-gamelog 1
//! seed 42
//! config hand_size=5 strike_out=zero
//! config-hash 3f1c0a9d2b7e6f10
//! deck R1 Y3 ...          (optional, 50 cards in draw order)
//! actions
//! P0
//! C1:R
//! score 17                (optional, present once the game ended)
//! ```
//!
//! Every line ends with `\n`. Text produced by [`GameLog::to_text`] parses back
//! to an equal log and re-serializes to the same bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use super::action::Action;
use super::card::Card;
use super::rules::RulesConfig;
use super::state::GameState;
use super::EngineError;

pub const LOG_FORMAT: &str = "cyclone-gamelog";
pub const LOG_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameLog {
    pub seed: u64,
    pub config: RulesConfig,
    /// Explicit deck order; when present the seed is not used for shuffling.
    pub deck: Option<Vec<Card>>,
    pub actions: Vec<Action>,
    pub final_score: Option<u32>,
}

impl GameLog {
    pub fn new(seed: u64, config: RulesConfig) -> GameLog {
        GameLog { seed, config, deck: None, actions: Vec::new(), final_score: None }
    }

    /// Captures a game played so far.
    pub fn from_state(state: &GameState, include_deck: bool) -> GameLog {
        GameLog {
            seed: state.seed(),
            config: *state.config(),
            deck: include_deck.then(|| state.deck_order().to_vec()),
            actions: state.history().iter().map(|e| e.action).collect(),
            final_score: state.is_terminal().then(|| state.final_score()),
        }
    }

    pub fn initial_state(&self) -> Result<GameState, EngineError> {
        match &self.deck {
            Some(deck) => GameState::with_deck(deck.clone(), self.seed, self.config),
            None => GameState::new(self.seed, self.config),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{LOG_FORMAT} {LOG_VERSION}");
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "config {}", self.config.canonical());
        let _ = writeln!(out, "config-hash {}", self.config.hash());
        if let Some(deck) = &self.deck {
            let cards: Vec<String> = deck.iter().map(Card::to_string).collect();
            let _ = writeln!(out, "deck {}", cards.join(" "));
        }
        out.push_str("actions\n");
        for a in &self.actions {
            let _ = writeln!(out, "{a}");
        }
        if let Some(score) = self.final_score {
            let _ = writeln!(out, "score {score}");
        }
        out
    }
}

impl FromStr for GameLog {
    type Err = EngineError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let mut next = |expect: &str| {
            lines.next().ok_or_else(|| EngineError::Log { line: 0, message: format!("missing {expect}") })
        };
        let err = |line: usize, message: String| EngineError::Log { line, message };

        let (n, header) = next("header")?;
        if header != format!("{LOG_FORMAT} {LOG_VERSION}") {
            return Err(err(n, format!("unsupported header `{header}`")));
        }
        let (n, seed) = next("seed")?;
        let seed = seed
            .strip_prefix("seed ")
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| err(n, "expected `seed <u64>`".into()))?;
        let (n, config) = next("config")?;
        let config = config
            .strip_prefix("config ")
            .ok_or_else(|| err(n, "expected `config ...`".into()))
            .and_then(|c| RulesConfig::parse_canonical(c).map_err(|e| err(n, e.to_string())))?;
        let (n, hash) = next("config-hash")?;
        let hash = hash.strip_prefix("config-hash ").ok_or_else(|| err(n, "expected `config-hash`".into()))?;
        if hash != config.hash() {
            return Err(err(n, format!("config hash {hash} does not match {}", config.hash())));
        }

        let (mut n, mut line) = next("actions")?;
        let mut deck = None;
        if let Some(cards) = line.strip_prefix("deck ") {
            let parsed: Result<Vec<Card>, _> = cards.split(' ').map(str::parse).collect();
            deck = Some(parsed.map_err(|e| err(n, e.to_string()))?);
            (n, line) = next("actions")?;
        }
        if line != "actions" {
            return Err(err(n, format!("expected `actions`, got `{line}`")));
        }

        let mut actions = Vec::new();
        let mut final_score = None;
        for (n, line) in lines {
            if final_score.is_some() {
                return Err(err(n, "content after score line".into()));
            }
            if let Some(score) = line.strip_prefix("score ") {
                final_score = Some(score.parse().map_err(|_| err(n, format!("bad score `{score}`")))?);
            } else {
                actions.push(line.parse().map_err(|e: super::ParseActionError| err(n, e.to_string()))?);
            }
        }
        Ok(GameLog { seed, config, deck, actions, final_score })
    }
}

/// Replays a log from its initial state. Fails with the index of the first
/// illegal action.
pub fn replay(log: &GameLog) -> Result<GameState, EngineError> {
    let mut state = log.initial_state()?;
    for (index, &action) in log.actions.iter().enumerate() {
        state.apply(action).map_err(|e| EngineError::Replay { index, source: Box::new(e) })?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Hint, StrikeOut};

    fn play_out(seed: u64) -> GameState {
        // Simple scripted policy: clue rank of the first teammate card when
        // possible, otherwise discard, otherwise play slot 0.
        let mut s = GameState::new(seed, RulesConfig::default()).unwrap();
        while !s.is_terminal() {
            let legal = s.legal_actions().unwrap();
            let pick = legal[(s.turn() as usize * 7) % legal.len()];
            let pick = if s.strikes() == 2 && matches!(pick, Action::Play(_)) {
                *legal.iter().find(|a| !matches!(a, Action::Play(_))).unwrap_or(&pick)
            } else {
                pick
            };
            s.apply(pick).unwrap();
        }
        s
    }

    #[test]
    fn empty_log_is_new_game() {
        let log = GameLog::new(42, RulesConfig::default());
        assert_eq!(replay(&log).unwrap(), GameState::new(42, RulesConfig::default()).unwrap());
    }

    #[test]
    fn replay_reproduces_live_game() {
        let live = play_out(17);
        for include_deck in [false, true] {
            let log = GameLog::from_state(&live, include_deck);
            assert_eq!(log.final_score, Some(live.final_score()));
            let replayed = replay(&log).unwrap();
            assert_eq!(replayed, live);
            assert_eq!(replayed.final_score(), log.final_score.unwrap());
        }
    }

    #[test]
    fn explicit_deck_overrides_seed() {
        let live = play_out(23);
        let mut log = GameLog::from_state(&live, true);
        log.seed = 999;
        let replayed = replay(&log).unwrap();
        assert_eq!(replayed.hand(0), live.hand(0));
        assert_eq!(replayed.final_score(), live.final_score());
        assert_eq!(replayed.history(), live.history());
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let live = play_out(5);
        for include_deck in [false, true] {
            let log = GameLog::from_state(&live, include_deck);
            let text = log.to_text();
            let parsed: GameLog = text.parse().unwrap();
            assert_eq!(parsed, log);
            assert_eq!(parsed.to_text(), text);
        }
        let mut log = GameLog::new(1, RulesConfig { strike_out: StrikeOut::StacksStand, ..Default::default() });
        log.actions.push(Action::Clue { target: 1, hint: Hint::Rank(3) });
        let text = log.to_text();
        assert_eq!(text.parse::<GameLog>().unwrap().to_text(), text);
    }

    #[test]
    fn illegal_action_is_reported_by_index() {
        let mut log = GameLog::new(42, RulesConfig::default());
        log.actions = vec![Action::Play(0), Action::Discard(9)];
        match replay(&log) {
            Err(EngineError::Replay { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        let good = GameLog::new(3, RulesConfig::default()).to_text();
        assert!("bogus\n".parse::<GameLog>().is_err());
        assert!(good.replace("config-hash ", "config-hash 00").parse::<GameLog>().is_err());
        assert!(format!("{good}P9x\n").parse::<GameLog>().is_err());
        assert!(format!("{good}score 3\nP0\n").parse::<GameLog>().is_err());
        assert!(good.replace("seed 3", "seed -3").parse::<GameLog>().is_err());
    }
}
