//! The factor-based expected-value policy.
//!
//! Every legal action is described by a [`FactorVector`]; its value is the inner
//! product with a [`WeightVector`]. Stacking the factor vectors of all `m` legal
//! actions as rows of `H` gives the value vector `H w`; the policy takes the
//! argmax. Infinite weights are handled as a separate dominance tier compared
//! before the finite value.

mod factors;
mod policy;
mod teammate;
mod weights;

pub use factors::{Category, Factor, FactorVector, NUM_FACTORS};
pub use policy::{best, choose_action, evaluate, expected_values, factor_vector, ActionEvaluation};
pub use teammate::{teammate_play_probs, teammate_unseen_estimate, TeammateModel};
pub use weights::{
    DominanceMode, EvalOptions, FactorWeight, Preset, Sign, TeammateAggregation, TwoStrikeReading, WeightVector,
    DEFAULT_LARGE_FINITE, WEIGHTS_FORMAT, WEIGHTS_VERSION,
};

use crate::engine::Action;
use crate::knowledge::KnowledgeError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecisionError {
    #[error("action {0} is not legal for this view")]
    Illegal(Action),
    #[error("no legal actions: not the viewer's turn or the game is over")]
    NoLegalActions,
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
    #[error("weight file: {0}")]
    WeightFile(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}
