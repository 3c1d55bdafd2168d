use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::factors::{Factor, NUM_FACTORS};
use super::DecisionError;
use crate::knowledge::GiveUpCurve;
use crate::Scalar;

pub const WEIGHTS_FORMAT: &str = "cyclone-weights";
pub const WEIGHTS_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn apply<T: Scalar>(self, v: T) -> T {
        match self {
            Sign::Positive => v,
            Sign::Negative => -v,
        }
    }
}

/// A factor's weight: a real, or an infinite weight that makes the factor
/// dominate all finite ones.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FactorWeight<T> {
    Finite(T),
    Dominant(Sign),
}

impl<T: Scalar> FactorWeight<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            FactorWeight::Finite(v) => Some(v),
            FactorWeight::Dominant(_) => None,
        }
    }

    fn to_f64(self) -> f64 {
        match self {
            FactorWeight::Finite(v) => v.as_f64(),
            FactorWeight::Dominant(Sign::Positive) => f64::INFINITY,
            FactorWeight::Dominant(Sign::Negative) => f64::NEG_INFINITY,
        }
    }

    fn from_f64(v: f64) -> Result<Self, DecisionError> {
        if v.is_nan() {
            return Err(DecisionError::WeightFile("NaN weight".into()));
        }
        Ok(match v {
            f64::INFINITY => FactorWeight::Dominant(Sign::Positive),
            f64::NEG_INFINITY => FactorWeight::Dominant(Sign::Negative),
            v => FactorWeight::Finite(T::lit(v)),
        })
    }
}

/// How infinite weights enter the comparison between actions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DominanceMode<T> {
    /// Dominant factors form a separate tier compared before the finite value.
    Lexicographic,
    /// Dominant factors are replaced by `±value` inside the finite sum.
    LargeFinite(T),
}

/// How the teammate's per-slot play probabilities are combined for clue factors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TeammateAggregation {
    #[default]
    Sum,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions<T> {
    pub dominance: DominanceMode<T>,
    pub teammate_aggregation: TeammateAggregation,
}

impl<T: Scalar> Default for EvalOptions<T> {
    fn default() -> Self {
        EvalOptions { dominance: DominanceMode::Lexicographic, teammate_aggregation: TeammateAggregation::Sum }
    }
}

/// Default stand-in magnitude for infinite weights under [`DominanceMode::LargeFinite`].
pub const DEFAULT_LARGE_FINITE: f64 = 1e3;

/// A complete play style: one weight per factor plus the give-up curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightVector<T> {
    pub weights: [FactorWeight<T>; NUM_FACTORS],
    pub curve: GiveUpCurve<T>,
    pub options: EvalOptions<T>,
}

impl<T: Scalar> Default for WeightVector<T> {
    fn default() -> Self {
        WeightVector::zeros()
    }
}

impl<T: Scalar> WeightVector<T> {
    pub fn zeros() -> Self {
        WeightVector {
            weights: [FactorWeight::Finite(T::zero()); NUM_FACTORS],
            curve: GiveUpCurve::default(),
            options: EvalOptions::default(),
        }
    }

    /// Finite weights in factor order, given as `f64` literals.
    pub fn from_finite(values: [f64; NUM_FACTORS]) -> Self {
        let mut w = Self::zeros();
        for (slot, v) in w.weights.iter_mut().zip(values) {
            *slot = FactorWeight::Finite(T::lit(v));
        }
        w
    }

    pub fn get(&self, f: Factor) -> FactorWeight<T> {
        self.weights[f.index()]
    }

    pub fn set(&mut self, f: Factor, w: FactorWeight<T>) {
        self.weights[f.index()] = w;
    }

    pub fn with(mut self, f: Factor, v: f64) -> Self {
        self.set(f, FactorWeight::Finite(T::lit(v)));
        self
    }

    pub fn is_dominant(&self, f: Factor) -> bool {
        matches!(self.get(f), FactorWeight::Dominant(_))
    }

    /// Weights used in the finite inner product. Dominant entries are 0 under
    /// lexicographic comparison and `±large` otherwise.
    pub fn finite_part(&self) -> [T; NUM_FACTORS] {
        self.weights.map(|w| match (w, self.options.dominance) {
            (FactorWeight::Finite(v), _) => v,
            (FactorWeight::Dominant(_), DominanceMode::Lexicographic) => T::zero(),
            (FactorWeight::Dominant(s), DominanceMode::LargeFinite(big)) => s.apply(big),
        })
    }

    /// Signs of the dominance tier; all zero under the large-finite fallback.
    pub fn tier_part(&self) -> [T; NUM_FACTORS] {
        self.weights.map(|w| match (w, self.options.dominance) {
            (FactorWeight::Dominant(s), DominanceMode::Lexicographic) => s.apply(T::one()),
            _ => T::zero(),
        })
    }

    /// Multiplies every finite weight by `alpha`.
    pub fn scale_finite(&self, alpha: T) -> Self {
        let mut w = *self;
        for slot in &mut w.weights {
            if let FactorWeight::Finite(v) = slot {
                *v = *v * alpha;
            }
        }
        w
    }

    pub fn cast<U: Scalar>(&self) -> WeightVector<U> {
        WeightVector {
            weights: self.weights.map(|w| match w {
                FactorWeight::Finite(v) => FactorWeight::Finite(U::lit(v.as_f64())),
                FactorWeight::Dominant(s) => FactorWeight::Dominant(s),
            }),
            curve: self.curve.cast(),
            options: EvalOptions {
                dominance: match self.options.dominance {
                    DominanceMode::Lexicographic => DominanceMode::Lexicographic,
                    DominanceMode::LargeFinite(v) => DominanceMode::LargeFinite(U::lit(v.as_f64())),
                },
                teammate_aggregation: self.options.teammate_aggregation,
            },
        }
    }

    /// Serializes to the versioned TOML weight format.
    pub fn to_toml(&self, name: Option<&str>) -> String {
        let file = WeightFile {
            format: WEIGHTS_FORMAT.to_string(),
            version: WEIGHTS_VERSION,
            name: name.map(str::to_string),
            weights: Factor::ALL.iter().map(|f| (f.name().to_string(), self.get(*f).to_f64())).collect(),
            give_up_curve: CurveFile {
                m0: self.curve.m0.as_f64(),
                amplitude: self.curve.amplitude.as_f64(),
                exponent: self.curve.exponent.as_f64(),
            },
            options: OptionsFile {
                dominance: match self.options.dominance {
                    DominanceMode::Lexicographic => "lexicographic".into(),
                    DominanceMode::LargeFinite(_) => "large-finite".into(),
                },
                large_finite: match self.options.dominance {
                    DominanceMode::LargeFinite(v) => v.as_f64(),
                    DominanceMode::Lexicographic => DEFAULT_LARGE_FINITE,
                },
                teammate_aggregation: self.options.teammate_aggregation,
            },
        };
        toml::to_string(&file).expect("weight file serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, DecisionError> {
        let file: WeightFile = toml::from_str(text).map_err(|e| DecisionError::WeightFile(e.to_string()))?;
        if file.format != WEIGHTS_FORMAT || file.version != WEIGHTS_VERSION {
            return Err(DecisionError::WeightFile(format!("unsupported format {} v{}", file.format, file.version)));
        }
        let mut w = WeightVector::zeros();
        for (name, value) in &file.weights {
            let f: Factor = name.parse().map_err(DecisionError::WeightFile)?;
            w.set(f, FactorWeight::from_f64(*value)?);
        }
        if let Some(missing) = Factor::ALL.iter().find(|f| !file.weights.contains_key(f.name())) {
            return Err(DecisionError::WeightFile(format!("missing weight `{missing}`")));
        }
        w.curve = GiveUpCurve {
            m0: T::lit(file.give_up_curve.m0),
            amplitude: T::lit(file.give_up_curve.amplitude),
            exponent: T::lit(file.give_up_curve.exponent),
        };
        w.curve.validate()?;
        w.options = EvalOptions {
            dominance: match file.options.dominance.as_str() {
                "lexicographic" => DominanceMode::Lexicographic,
                "large-finite" => DominanceMode::LargeFinite(T::lit(file.options.large_finite)),
                other => return Err(DecisionError::WeightFile(format!("unknown dominance mode `{other}`"))),
            },
            teammate_aggregation: file.options.teammate_aggregation,
        };
        Ok(w)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightFile {
    format: String,
    version: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    name: Option<String>,
    weights: BTreeMap<String, f64>,
    give_up_curve: CurveFile,
    options: OptionsFile,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    m0: f64,
    amplitude: f64,
    exponent: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionsFile {
    dominance: String,
    large_finite: f64,
    teammate_aggregation: TeammateAggregation,
}

/// Reading of the published `3` for the two-strike misplay factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TwoStrikeReading {
    /// A penalty of magnitude 3 (applied weight −3).
    #[default]
    Penalty,
    /// The value as printed, +3.
    Literal,
}

/// The three published play styles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    HumanLike,
    HumanComplementary,
    SelfPlay,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::HumanLike, Preset::HumanComplementary, Preset::SelfPlay];

    pub fn name(self) -> &'static str {
        match self {
            Preset::HumanLike => "human-like",
            Preset::HumanComplementary => "human-complementary",
            Preset::SelfPlay => "self-play",
        }
    }

    pub fn weights<T: Scalar>(self) -> WeightVector<T> {
        self.weights_with(TwoStrikeReading::Penalty)
    }

    pub fn weights_with<T: Scalar>(self, reading: TwoStrikeReading) -> WeightVector<T> {
        use Factor::*;
        use FactorWeight::{Dominant, Finite};
        let two_strike = |v: f64| match reading {
            TwoStrikeReading::Penalty => -v,
            TwoStrikeReading::Literal => v,
        };
        let f = |v: f64| Finite(T::lit(v));
        let table: [(Factor, FactorWeight<T>); NUM_FACTORS] = match self {
            Preset::HumanLike => [
                (PlayPlayable, f(1.0)),
                (MisplayFewStrikes, f(-1.0)),
                (MisplayTwoStrikes, f(two_strike(3.0))),
                (OtherPlaysPlayable, f(1.5)),
                (OtherMisplays, f(0.0)),
                (DiscardNonEndangered, f(0.1)),
                (DiscardUnneeded, f(0.25)),
                (PlaySingledOut, f(3.0)),
                (ClueSinglesOutPlayable, f(3.0)),
                (ClueSinglesOutNonPlayable, f(0.0)),
                (DiscardSingledOut, f(-0.5)),
                (CluePerInfoToken, f(0.5)),
            ],
            Preset::HumanComplementary => [
                (PlayPlayable, Dominant(Sign::Positive)),
                (MisplayFewStrikes, f(-1.0)),
                (MisplayTwoStrikes, Dominant(Sign::Negative)),
                (OtherPlaysPlayable, f(10.0)),
                (OtherMisplays, f(0.0)),
                (DiscardNonEndangered, f(0.55)),
                (DiscardUnneeded, f(1.0)),
                (PlaySingledOut, f(1.5)),
                (ClueSinglesOutPlayable, f(3.0)),
                (ClueSinglesOutNonPlayable, f(-5.0)),
                (DiscardSingledOut, f(-2.0)),
                (CluePerInfoToken, f(0.1)),
            ],
            Preset::SelfPlay => [
                (PlayPlayable, f(11.0)),
                (MisplayFewStrikes, f(-1.0)),
                (MisplayTwoStrikes, f(two_strike(3.0))),
                (OtherPlaysPlayable, f(2.0)),
                (OtherMisplays, f(1.0)),
                (DiscardNonEndangered, f(0.8)),
                (DiscardUnneeded, f(0.0)),
                (PlaySingledOut, f(5.0)),
                (ClueSinglesOutPlayable, f(2.0)),
                (ClueSinglesOutNonPlayable, f(-4.0)),
                (DiscardSingledOut, f(-3.0)),
                (CluePerInfoToken, f(0.0)),
            ],
        };
        let mut w = WeightVector::zeros();
        for (factor, weight) in table {
            w.set(factor, weight);
        }
        w
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = DecisionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human-like" => Ok(Preset::HumanLike),
            "human-complementary" | "human-compl" | "human-compl." => Ok(Preset::HumanComplementary),
            "self-play" => Ok(Preset::SelfPlay),
            other => Err(DecisionError::UnknownPreset(other.to_string())),
        }
    }
}
