use super::factors::{Factor, FactorVector};
use super::teammate::teammate_play_probs;
use super::weights::{TeammateAggregation, WeightVector};
use super::DecisionError;
use crate::engine::{Action, MAX_STRIKES};
use crate::knowledge::{single_out_target, PlayerView};
use crate::Scalar;

/// One scored legal action.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionEvaluation<T> {
    pub action: Action,
    pub h: FactorVector<T>,
    /// Signed sum of the entries whose weight is infinite.
    pub dominant_tier: T,
    /// Inner product of `h` with the finite weights.
    pub ev: T,
}

impl<T: Scalar> ActionEvaluation<T> {
    /// Lexicographic `(dominant_tier, ev)` comparison.
    pub fn beats(&self, other: &Self) -> bool {
        self.dominant_tier > other.dominant_tier || (self.dominant_tier == other.dominant_tier && self.ev > other.ev)
    }
}

/// Builds the factor vector of `action` for the viewer. The action must be legal.
pub fn factor_vector<T: Scalar>(
    view: &PlayerView,
    action: Action,
    w: &WeightVector<T>,
) -> Result<FactorVector<T>, DecisionError> {
    if !view.legal_actions().contains(&action) {
        return Err(DecisionError::Illegal(action));
    }
    factors_unchecked(view, action, w)
}

fn factors_unchecked<T: Scalar>(
    view: &PlayerView,
    action: Action,
    w: &WeightVector<T>,
) -> Result<FactorVector<T>, DecisionError> {
    let mut h = FactorVector::zeros();
    let flag = |b: bool| if b { T::one() } else { T::zero() };
    match action {
        Action::Play(slot) => {
            let p = T::from_prob(view.prob_playable(slot)?);
            let miss = T::one() - p;
            let at_last_strike = view.strikes() + 1 >= MAX_STRIKES;
            h[Factor::PlayPlayable] = p;
            h[Factor::MisplayFewStrikes] = if at_last_strike { T::zero() } else { miss };
            h[Factor::MisplayTwoStrikes] = if at_last_strike { miss } else { T::zero() };
            h[Factor::PlaySingledOut] = flag(view.own_hand()[slot].singled_out);
        }
        Action::Discard(slot) => {
            h[Factor::DiscardNonEndangered] = T::from_prob(view.prob_non_endangered(slot)?);
            h[Factor::DiscardUnneeded] = T::from_prob(view.prob_unneeded(slot, &w.curve)?);
            h[Factor::DiscardSingledOut] = flag(view.own_hand()[slot].singled_out);
        }
        Action::Clue { hint, .. } => {
            let model = teammate_play_probs(view, Some(hint))?;
            let (mut good, mut bad) = (T::zero(), T::zero());
            for (v, &p) in view.teammate_hand().iter().zip(&model.play) {
                let p = T::from_prob(p);
                let acc = if view.is_playable(v.card) { &mut good } else { &mut bad };
                *acc = match w.options.teammate_aggregation {
                    TeammateAggregation::Sum => *acc + p,
                    TeammateAggregation::Max => acc.max(p),
                };
            }
            h[Factor::OtherPlaysPlayable] = good;
            h[Factor::OtherMisplays] = bad;

            let before: Vec<_> = view.teammate_hand().iter().map(|v| v.knowledge).collect();
            if let Some(slot) = single_out_target(&before, view.touched_by(hint), hint) {
                let playable = view.is_playable(view.teammate_hand()[slot].card);
                h[Factor::ClueSinglesOutPlayable] = flag(playable);
                h[Factor::ClueSinglesOutNonPlayable] = flag(!playable);
            }
            h[Factor::CluePerInfoToken] = T::lit(f64::from(view.info_tokens()));
        }
    }
    Ok(h)
}

/// Scores `h` under `w`.
pub fn evaluate<T: Scalar>(action: Action, h: FactorVector<T>, w: &WeightVector<T>) -> ActionEvaluation<T> {
    ActionEvaluation { action, h, dominant_tier: h.dot(&w.tier_part()), ev: h.dot(&w.finite_part()) }
}

/// One evaluation per legal action, in canonical order.
pub fn expected_values<T: Scalar>(
    view: &PlayerView,
    w: &WeightVector<T>,
) -> Result<Vec<ActionEvaluation<T>>, DecisionError> {
    view.legal_actions().into_iter().map(|a| Ok(evaluate(a, factors_unchecked(view, a, w)?, w))).collect()
}

/// Picks the best evaluation; ties keep the earliest.
pub fn best<T: Scalar>(evals: &[ActionEvaluation<T>]) -> Option<&ActionEvaluation<T>> {
    evals.iter().fold(None, |best, e| match best {
        Some(b) if !e.beats(b) => Some(b),
        _ => Some(e),
    })
}

/// The action with the highest `(dominant_tier, ev)`, ties broken by canonical order.
pub fn choose_action<T: Scalar>(view: &PlayerView, w: &WeightVector<T>) -> Result<Action, DecisionError> {
    let evals = expected_values(view, w)?;
    best(&evals).map(|e| e.action).ok_or(DecisionError::NoLegalActions)
}
