use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const NUM_COLORS: usize = 5;
pub const NUM_RANKS: usize = 5;
/// Number of distinct card identities.
pub const NUM_IDENTITIES: usize = NUM_COLORS * NUM_RANKS;
pub const DECK_SIZE: usize = 50;
/// Copies of ranks 1..=5 in each suit.
pub const COPIES_PER_RANK: [u8; NUM_RANKS] = [3, 2, 2, 2, 1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Red,
    Yellow,
    Green,
    White,
    Blue,
}

impl Color {
    pub const ALL: [Color; NUM_COLORS] = [Color::Red, Color::Yellow, Color::Green, Color::White, Color::Blue];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Color> {
        Self::ALL.get(i).copied()
    }

    pub fn letter(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Yellow => 'Y',
            Color::Green => 'G',
            Color::White => 'W',
            Color::Blue => 'B',
        }
    }

    pub fn from_letter(c: char) -> Option<Color> {
        Self::ALL.iter().copied().find(|col| col.letter() == c)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A card identity. Rank is always in `1..=5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Card {
    color: Color,
    rank: u8,
}

impl Card {
    /// Panics if `rank` is outside `1..=5`.
    pub fn new(color: Color, rank: u8) -> Card {
        Card::try_new(color, rank).expect("card rank must be in 1..=5")
    }

    pub fn try_new(color: Color, rank: u8) -> Option<Card> {
        (1..=NUM_RANKS as u8).contains(&rank).then_some(Card { color, rank })
    }

    pub fn color(self) -> Color {
        self.color
    }

    pub fn rank(self) -> u8 {
        self.rank
    }

    /// Dense index `color * 5 + (rank - 1)` in `0..25`.
    pub fn id(self) -> usize {
        self.color.index() * NUM_RANKS + usize::from(self.rank - 1)
    }

    pub fn from_id(id: usize) -> Option<Card> {
        (id < NUM_IDENTITIES).then(|| Card { color: Color::ALL[id / NUM_RANKS], rank: (id % NUM_RANKS) as u8 + 1 })
    }

    /// Copies of this identity in the full deck.
    pub fn copies(self) -> u8 {
        COPIES_PER_RANK[usize::from(self.rank - 1)]
    }

    /// All 25 identities in id order.
    pub fn identities() -> impl Iterator<Item = Card> {
        (0..NUM_IDENTITIES).filter_map(Card::from_id)
    }

    /// The standard 50-card deck in identity order.
    pub fn full_deck() -> Vec<Card> {
        Card::identities().flat_map(|c| std::iter::repeat_n(c, usize::from(c.copies()))).collect()
    }
}

/// Per-identity counts of the full deck.
pub fn full_counts() -> [u8; NUM_IDENTITIES] {
    let mut counts = [0u8; NUM_IDENTITIES];
    for card in Card::identities() {
        counts[card.id()] = card.copies();
    }
    counts
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.color.letter(), self.rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed card `{0}`")]
pub struct ParseCardError(pub String);

impl FromStr for Card {
    type Err = ParseCardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let (Some(c), Some(r), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(ParseCardError(s.to_string()));
        };
        let color = Color::from_letter(c).ok_or_else(|| ParseCardError(s.to_string()))?;
        let rank = r.to_digit(10).ok_or_else(|| ParseCardError(s.to_string()))? as u8;
        Card::try_new(color, rank).ok_or_else(|| ParseCardError(s.to_string()))
    }
}

impl Serialize for Card {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Card {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
