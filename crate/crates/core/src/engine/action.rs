use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::card::{Card, Color, NUM_RANKS};

/// Seat index, `0` or `1`.
pub type Player = usize;

/// The information carried by a clue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hint {
    Color(Color),
    Rank(u8),
}

impl Hint {
    pub fn matches(self, card: Card) -> bool {
        match self {
            Hint::Color(c) => card.color() == c,
            Hint::Rank(r) => card.rank() == r,
        }
    }

    /// Color clues in suit order, then rank clues 1..=5.
    pub fn all() -> impl Iterator<Item = Hint> {
        Color::ALL.into_iter().map(Hint::Color).chain((1..=NUM_RANKS as u8).map(Hint::Rank))
    }
}

impl fmt::Display for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hint::Color(c) => write!(f, "{c}"),
            Hint::Rank(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActionKind {
    Play,
    Discard,
    ClueColor,
    ClueRank,
}

/// A move. Compact text form: `P0`, `D3`, `C1:R`, `C1:3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Play(usize),
    Discard(usize),
    Clue { target: Player, hint: Hint },
}

impl Action {
    pub fn kind(self) -> ActionKind {
        match self {
            Action::Play(_) => ActionKind::Play,
            Action::Discard(_) => ActionKind::Discard,
            Action::Clue { hint: Hint::Color(_), .. } => ActionKind::ClueColor,
            Action::Clue { hint: Hint::Rank(_), .. } => ActionKind::ClueRank,
        }
    }

    pub fn slot(self) -> Option<usize> {
        match self {
            Action::Play(s) | Action::Discard(s) => Some(s),
            Action::Clue { .. } => None,
        }
    }

    pub fn is_clue(self) -> bool {
        matches!(self, Action::Clue { .. })
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Play(s) => write!(f, "P{s}"),
            Action::Discard(s) => write!(f, "D{s}"),
            Action::Clue { target, hint } => write!(f, "C{target}:{hint}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed action `{0}`")]
pub struct ParseActionError(pub String);

impl FromStr for Action {
    type Err = ParseActionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseActionError(s.to_string());
        let digit = |t: &str| -> Result<usize, ParseActionError> {
            match t.as_bytes() {
                [d @ b'0'..=b'9'] => Ok(usize::from(d - b'0')),
                _ => Err(err()),
            }
        };
        if let Some(rest) = s.strip_prefix('P') {
            return Ok(Action::Play(digit(rest)?));
        }
        if let Some(rest) = s.strip_prefix('D') {
            return Ok(Action::Discard(digit(rest)?));
        }
        let rest = s.strip_prefix('C').ok_or_else(err)?;
        let (target, value) = rest.split_once(':').ok_or_else(err)?;
        let target = digit(target)?;
        let mut chars = value.chars();
        let (Some(v), None) = (chars.next(), chars.next()) else {
            return Err(err());
        };
        let hint = if let Some(color) = Color::from_letter(v) {
            Hint::Color(color)
        } else {
            match v.to_digit(10) {
                Some(r @ 1..=5) => Hint::Rank(r as u8),
                _ => return Err(err()),
            }
        };
        Ok(Action::Clue { target, hint })
    }
}

impl Serialize for Action {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Action {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Set of hand slots, bit `i` for slot `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlotMask(pub u8);

impl SlotMask {
    pub fn from_slots(slots: impl IntoIterator<Item = usize>) -> SlotMask {
        SlotMask(slots.into_iter().fold(0u8, |m, s| m | (1 << s)))
    }

    pub fn contains(self, slot: usize) -> bool {
        slot < 8 && self.0 & (1 << slot) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..8).filter(move |&s| self.contains(s))
    }
}
