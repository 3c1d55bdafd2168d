//! Scalar abstraction for the weight arithmetic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Exact probability with a small denominator (at most the 50-card deck).
pub type Prob = Ratio<u32>;

/// Floating point type usable for weights, factor entries and expected values.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, panicking only if the type cannot represent it at all.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("scalar literal out of range")
    }

    /// Converts an exact probability.
    fn from_prob(p: Prob) -> Self {
        Self::lit(f64::from(*p.numer())) / Self::lit(f64::from(*p.denom()))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
