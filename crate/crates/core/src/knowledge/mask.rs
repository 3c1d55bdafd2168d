use crate::engine::{Card, Color, Hint, NUM_IDENTITIES, NUM_RANKS};

/// Set of identities (bit `card.id()`) a hidden card may still be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PossibleMask(u32);

impl Default for PossibleMask {
    fn default() -> Self {
        PossibleMask::ALL
    }
}

impl PossibleMask {
    pub const ALL: PossibleMask = PossibleMask((1 << NUM_IDENTITIES) - 1);
    pub const EMPTY: PossibleMask = PossibleMask(0);

    pub fn from_bits(bits: u32) -> PossibleMask {
        PossibleMask(bits & Self::ALL.0)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn single(card: Card) -> PossibleMask {
        PossibleMask(1 << card.id())
    }

    pub fn from_cards(cards: impl IntoIterator<Item = Card>) -> PossibleMask {
        PossibleMask(cards.into_iter().fold(0, |m, c| m | (1 << c.id())))
    }

    /// Identities matching `hint`.
    pub fn of_hint(hint: Hint) -> PossibleMask {
        PossibleMask::from_cards(Card::identities().filter(|&c| hint.matches(c)))
    }

    pub fn contains(self, card: Card) -> bool {
        self.0 & (1 << card.id()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn intersect(self, other: PossibleMask) -> PossibleMask {
        PossibleMask(self.0 & other.0)
    }

    /// Applies a clue: keep the matching identities if the card was touched,
    /// drop them otherwise.
    pub fn apply_hint(self, hint: Hint, touched: bool) -> PossibleMask {
        let m = PossibleMask::of_hint(hint).0;
        PossibleMask(if touched { self.0 & m } else { self.0 & !m })
    }

    pub fn cards(self) -> impl Iterator<Item = Card> {
        (0..NUM_IDENTITIES).filter(move |&i| self.0 & (1 << i) != 0).filter_map(Card::from_id)
    }

    pub fn colors(self) -> impl Iterator<Item = Color> {
        Color::ALL.into_iter().filter(move |&c| !self.intersect(Self::of_hint(Hint::Color(c))).is_empty())
    }

    pub fn ranks(self) -> impl Iterator<Item = u8> {
        (1..=NUM_RANKS as u8).filter(move |&r| !self.intersect(Self::of_hint(Hint::Rank(r))).is_empty())
    }

    /// The color, if every remaining identity shares it.
    pub fn known_color(self) -> Option<Color> {
        let mut colors = self.colors();
        match (colors.next(), colors.next()) {
            (Some(c), None) => Some(c),
            _ => None,
        }
    }

    pub fn known_rank(self) -> Option<u8> {
        let mut ranks = self.ranks();
        match (ranks.next(), ranks.next()) {
            (Some(r), None) => Some(r),
            _ => None,
        }
    }

    /// The identity, if the mask holds exactly one.
    pub fn known_card(self) -> Option<Card> {
        (self.len() == 1).then(|| self.cards().next()).flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hint_restriction() {
        let m = PossibleMask::ALL.apply_hint(Hint::Rank(1), true);
        assert_eq!(m.len(), 5);
        assert_eq!(m.known_rank(), Some(1));
        assert_eq!(m.known_color(), None);
        let m = m.apply_hint(Hint::Color(Color::Red), false);
        assert_eq!(m.len(), 4);
        let m = PossibleMask::ALL.apply_hint(Hint::Color(Color::Red), true).apply_hint(Hint::Rank(3), true);
        assert_eq!(m.known_card(), Some(Card::new(Color::Red, 3)));
    }

    #[test]
    fn negative_information() {
        let m = PossibleMask::ALL.apply_hint(Hint::Rank(1), false);
        assert_eq!(m.len(), 20);
        assert!(m.ranks().all(|r| r != 1));
    }
}
