use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use crate::Scalar;

pub const NUM_FACTORS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Category {
    Play,
    Discard,
    Conventions,
}

/// The twelve factors an action is described by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    PlayPlayable,
    /// Misplay while holding fewer than two strikes.
    MisplayFewStrikes,
    /// Misplay at two strikes, which ends the game.
    MisplayTwoStrikes,
    OtherPlaysPlayable,
    OtherMisplays,
    DiscardNonEndangered,
    DiscardUnneeded,
    PlaySingledOut,
    ClueSinglesOutPlayable,
    ClueSinglesOutNonPlayable,
    DiscardSingledOut,
    /// Info tokens held when giving a clue.
    CluePerInfoToken,
}

impl Factor {
    pub const ALL: [Factor; NUM_FACTORS] = [
        Factor::PlayPlayable,
        Factor::MisplayFewStrikes,
        Factor::MisplayTwoStrikes,
        Factor::OtherPlaysPlayable,
        Factor::OtherMisplays,
        Factor::DiscardNonEndangered,
        Factor::DiscardUnneeded,
        Factor::PlaySingledOut,
        Factor::ClueSinglesOutPlayable,
        Factor::ClueSinglesOutNonPlayable,
        Factor::DiscardSingledOut,
        Factor::CluePerInfoToken,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Factor::PlayPlayable => "play_playable",
            Factor::MisplayFewStrikes => "misplay_few_strikes",
            Factor::MisplayTwoStrikes => "misplay_two_strikes",
            Factor::OtherPlaysPlayable => "other_plays_playable",
            Factor::OtherMisplays => "other_misplays",
            Factor::DiscardNonEndangered => "discard_non_endangered",
            Factor::DiscardUnneeded => "discard_unneeded",
            Factor::PlaySingledOut => "play_singled_out",
            Factor::ClueSinglesOutPlayable => "clue_singles_out_playable",
            Factor::ClueSinglesOutNonPlayable => "clue_singles_out_non_playable",
            Factor::DiscardSingledOut => "discard_singled_out",
            Factor::CluePerInfoToken => "clue_per_info_token",
        }
    }

    pub fn category(self) -> Category {
        use Factor::*;
        match self {
            PlayPlayable | MisplayFewStrikes | MisplayTwoStrikes | OtherPlaysPlayable | OtherMisplays => Category::Play,
            DiscardNonEndangered | DiscardUnneeded => Category::Discard,
            _ => Category::Conventions,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Factor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Factor::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| format!("unknown factor `{s}`"))
    }
}

/// Per-action vector of event probabilities and resource quantities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorVector<T>(pub [T; NUM_FACTORS]);

impl<T: Scalar> Default for FactorVector<T> {
    fn default() -> Self {
        FactorVector([T::zero(); NUM_FACTORS])
    }
}

impl<T: Scalar> FactorVector<T> {
    pub fn zeros() -> Self {
        Self::default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Factor, T)> + '_ {
        Factor::ALL.into_iter().map(|f| (f, self.0[f.index()]))
    }

    pub fn dot(&self, w: &[T; NUM_FACTORS]) -> T {
        self.0.iter().zip(w).map(|(&h, &w)| h * w).sum()
    }
}

impl<T> Index<Factor> for FactorVector<T> {
    type Output = T;
    fn index(&self, f: Factor) -> &T {
        &self.0[f.index()]
    }
}

impl<T> IndexMut<Factor> for FactorVector<T> {
    fn index_mut(&mut self, f: Factor) -> &mut T {
        &mut self.0[f.index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Factor::ALL {
            assert_eq!(f.name().parse::<Factor>().unwrap(), f);
        }
        assert_eq!(Factor::ALL.iter().filter(|f| f.category() == Category::Play).count(), 5);
        assert_eq!(Factor::ALL.iter().filter(|f| f.category() == Category::Discard).count(), 2);
        assert_eq!(Factor::ALL.iter().filter(|f| f.category() == Category::Conventions).count(), 5);
    }
}
