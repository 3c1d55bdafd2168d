use serde::{Deserialize, Serialize};

use super::KnowledgeError;
use crate::Scalar;

/// Deck size at which the curve is normalized (cards left after the deal).
pub const FULL_DECK_AFTER_DEAL: usize = 40;

/// Largest tolerated deficit as a function of deck size:
/// `m(s) = m0 + amplitude * (s / 40)^exponent`.
///
/// The default (1.0, 4.5, 0.4) gives `m(40) = 5.5`, stays at or above 5 down to
/// a deck of 30, drops below 5 at 29, and reaches 1 at an empty deck so an
/// immediately playable card is never given up.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GiveUpCurve<T> {
    pub m0: T,
    pub amplitude: T,
    pub exponent: T,
}

impl<T: Scalar> Default for GiveUpCurve<T> {
    fn default() -> Self {
        GiveUpCurve { m0: T::lit(1.0), amplitude: T::lit(4.5), exponent: T::lit(0.4) }
    }
}

impl<T: Scalar> GiveUpCurve<T> {
    /// Parameters must be finite with non-negative amplitude and exponent, which
    /// keeps `m` non-decreasing in the deck size.
    pub fn validate(&self) -> Result<(), KnowledgeError> {
        let finite = self.m0.is_finite() && self.amplitude.is_finite() && self.exponent.is_finite();
        if !finite || self.amplitude < T::zero() || self.exponent < T::zero() {
            return Err(KnowledgeError::InvalidCurve(format!(
                "m0={} amplitude={} exponent={}",
                self.m0, self.amplitude, self.exponent
            )));
        }
        Ok(())
    }

    pub fn threshold(&self, deck_size: usize) -> Result<T, KnowledgeError> {
        if deck_size > FULL_DECK_AFTER_DEAL {
            return Err(KnowledgeError::DeckSizeOutOfRange(deck_size));
        }
        let frac = T::lit(deck_size as f64) / T::lit(FULL_DECK_AFTER_DEAL as f64);
        Ok(self.m0 + self.amplitude * frac.powf(self.exponent))
    }

    pub fn cast<U: Scalar>(&self) -> GiveUpCurve<U> {
        GiveUpCurve {
            m0: U::lit(self.m0.as_f64()),
            amplitude: U::lit(self.amplitude.as_f64()),
            exponent: U::lit(self.exponent.as_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_anchors() {
        let curve = GiveUpCurve::<f64>::default();
        assert!((curve.threshold(40).unwrap() - 5.5).abs() < 1e-12);
        assert!((curve.threshold(0).unwrap() - 1.0).abs() < 1e-12);
        assert!(curve.threshold(29).unwrap() < 5.0);
        assert!(curve.threshold(30).unwrap() >= 5.0);
        let mut prev = f64::NEG_INFINITY;
        for s in 0..=40 {
            let m = curve.threshold(s).unwrap();
            assert!(m >= prev);
            prev = m;
        }
        assert!(matches!(curve.threshold(41), Err(KnowledgeError::DeckSizeOutOfRange(41))));
    }

    #[test]
    fn works_in_f32() {
        let curve = GiveUpCurve::<f32>::default();
        assert!((curve.threshold(40).unwrap() - 5.5).abs() < 1e-6);
        assert!(curve.threshold(29).unwrap() < 5.0);
    }

    #[test]
    fn rejects_decreasing_parameters() {
        let curve = GiveUpCurve { m0: 1.0, amplitude: -1.0, exponent: 0.4 };
        assert!(curve.validate().is_err());
        let curve = GiveUpCurve { m0: 1.0, amplitude: 1.0, exponent: f64::NAN };
        assert!(curve.validate().is_err());
        assert!(GiveUpCurve::<f64>::default().validate().is_ok());
    }
}
