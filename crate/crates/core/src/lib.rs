//! Two-player Hanabi with a factor-based expected-value agent.
//!
//! The crate is split along the lines of the agent's life cycle:
//!
//! - [`engine`]: deterministic rules, transitions and replayable game logs.
//! - [`knowledge`]: per-player information sets, card counting and the give-up curve.
//! - [`decision`]: twelve-factor action vectors, weight vectors and the argmax policy.
//! - [`trainer`]: full-factorial coordinate search over weight vectors.
//! - [`harness`]: batch simulation, cross-play tables, decision capture and humanness.
//!
//! Numeric code that touches weights is generic over [`Scalar`] (`f32` or `f64`).
//! Card-counting probabilities are exact rationals ([`Prob`]). The aliases below fix
//! the scalar to `f64`, which is what the harness, CLI and service use.

pub mod decision;
pub mod engine;
pub mod harness;
pub mod knowledge;
pub mod scalar;
pub mod trainer;

pub use scalar::{Prob, Scalar};

/// Weight vector over `f64`.
pub type Weights = decision::WeightVector<f64>;
/// Factor vector over `f64`.
pub type Factors = decision::FactorVector<f64>;
/// Action evaluation over `f64`.
pub type Evaluation = decision::ActionEvaluation<f64>;
/// Give-up curve over `f64`.
pub type Curve = knowledge::GiveUpCurve<f64>;
