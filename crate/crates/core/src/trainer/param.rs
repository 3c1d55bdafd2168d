use std::fmt;
use std::str::FromStr;

use crate::decision::{Factor, FactorWeight, WeightVector, NUM_FACTORS};
use crate::Scalar;

/// A searchable coordinate: one factor weight or one give-up curve parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Weight(Factor),
    CurveM0,
    CurveAmplitude,
    CurveExponent,
}

pub const NUM_PARAMS: usize = NUM_FACTORS + 3;

impl Param {
    /// Factors in table order, then the curve.
    pub fn all() -> [Param; NUM_PARAMS] {
        let mut out = [Param::CurveM0; NUM_PARAMS];
        for (slot, f) in out.iter_mut().zip(Factor::ALL) {
            *slot = Param::Weight(f);
        }
        out[NUM_FACTORS + 1] = Param::CurveAmplitude;
        out[NUM_FACTORS + 2] = Param::CurveExponent;
        out
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::Weight(f) => f.name(),
            Param::CurveM0 => "curve.m0",
            Param::CurveAmplitude => "curve.amplitude",
            Param::CurveExponent => "curve.exponent",
        }
    }

    /// `None` for a dominant weight.
    pub fn get<T: Scalar>(self, w: &WeightVector<T>) -> Option<T> {
        match self {
            Param::Weight(f) => w.get(f).finite(),
            Param::CurveM0 => Some(w.curve.m0),
            Param::CurveAmplitude => Some(w.curve.amplitude),
            Param::CurveExponent => Some(w.curve.exponent),
        }
    }

    pub fn set<T: Scalar>(self, w: &mut WeightVector<T>, v: T) {
        match self {
            Param::Weight(f) => w.set(f, FactorWeight::Finite(v)),
            Param::CurveM0 => w.curve.m0 = v,
            Param::CurveAmplitude => w.curve.amplitude = v,
            Param::CurveExponent => w.curve.exponent = v,
        }
    }

    pub fn is_trainable<T: Scalar>(self, w: &WeightVector<T>) -> bool {
        self.get(w).is_some()
    }
}

/// Every parameter of `w` except dominant weights, in [`Param::all`] order.
pub fn trainable_params<T: Scalar>(w: &WeightVector<T>) -> Vec<Param> {
    Param::all().into_iter().filter(|p| p.is_trainable(w)).collect()
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Param::all().into_iter().find(|p| p.name() == s).ok_or_else(|| format!("unknown parameter `{s}`"))
    }
}

impl serde::Serialize for Param {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for Param {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::Preset;

    #[test]
    fn fifteen_distinct_names() {
        let all = Param::all();
        for p in all {
            assert_eq!(p.name().parse::<Param>().unwrap(), p);
        }
        let mut names: Vec<_> = all.iter().map(|p| p.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 15);
    }

    #[test]
    fn dominant_weights_are_not_trainable() {
        assert_eq!(trainable_params(&Preset::HumanComplementary.weights::<f64>()).len(), 13);
        assert_eq!(trainable_params(&Preset::SelfPlay.weights::<f64>()).len(), 15);
    }

    #[test]
    fn set_then_get() {
        let mut w = Preset::HumanLike.weights::<f64>();
        for (i, p) in Param::all().into_iter().enumerate() {
            p.set(&mut w, i as f64 + 0.5);
        }
        for (i, p) in Param::all().into_iter().enumerate() {
            assert_eq!(p.get(&w), Some(i as f64 + 0.5));
        }
    }
}
