use serde::{Deserialize, Serialize};

use super::TrainerError;
use crate::engine::RulesConfig;
use crate::harness::{simulate_scores, DecisionDb, MatchStats, PreparedDb};
use crate::Weights;

/// The games every candidate of an experiment plays: seeds `base .. base + games`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedBlock {
    pub base: u64,
    pub games: usize,
}

/// An objective value and the half-width of its 95% interval (0 when exact).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub ci95: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Estimate {
        Estimate { value, ci95: 0.0 }
    }
}

/// Something to maximize. Must be a pure function of the weights and seed block.
pub trait Objective: Sync {
    fn id(&self) -> String;
    fn evaluate(&self, w: &Weights, seeds: SeedBlock) -> Result<Estimate, TrainerError>;
}

fn game_estimate(scores: &[u32]) -> Estimate {
    let s = MatchStats::from_scores("", "", scores);
    Estimate { value: s.mean, ci95: s.ci95 }
}

fn check_games(seeds: SeedBlock) -> Result<(), TrainerError> {
    if seeds.games == 0 {
        return Err(TrainerError::Objective("game objectives need at least one game per candidate".into()));
    }
    Ok(())
}

/// Mean score of `w` playing with a copy of itself.
#[derive(Clone, Debug, Default)]
pub struct SelfPlay {
    pub rules: RulesConfig,
}

impl Objective for SelfPlay {
    fn id(&self) -> String {
        "selfplay".into()
    }

    fn evaluate(&self, w: &Weights, seeds: SeedBlock) -> Result<Estimate, TrainerError> {
        check_games(seeds)?;
        Ok(game_estimate(&simulate_scores(w, w, seeds.games, seeds.base, self.rules)?))
    }
}

/// Mean score of `w` paired with a fixed partner.
#[derive(Clone, Debug)]
pub struct Paired {
    pub partner: Weights,
    pub partner_label: String,
    pub rules: RulesConfig,
}

impl Objective for Paired {
    fn id(&self) -> String {
        format!("paired:{}", self.partner_label)
    }

    fn evaluate(&self, w: &Weights, seeds: SeedBlock) -> Result<Estimate, TrainerError> {
        check_games(seeds)?;
        Ok(game_estimate(&simulate_scores(w, &self.partner, seeds.games, seeds.base, self.rules)?))
    }
}

/// Fraction of recorded decisions that `w` reproduces. Ignores the seed block.
#[derive(Clone, Debug)]
pub struct Humanness {
    db: PreparedDb,
}

impl Humanness {
    pub fn new(db: &DecisionDb) -> Result<Humanness, TrainerError> {
        if db.is_empty() {
            return Err(TrainerError::Objective("humanness needs a non-empty decision db".into()));
        }
        Ok(Humanness { db: PreparedDb::new(db)? })
    }

    pub fn records(&self) -> usize {
        self.db.len()
    }
}

impl Objective for Humanness {
    fn id(&self) -> String {
        "humanness".into()
    }

    fn evaluate(&self, w: &Weights, _: SeedBlock) -> Result<Estimate, TrainerError> {
        Ok(Estimate::exact(self.db.humanness(w)?))
    }
}

/// Wraps a closure; mostly for synthetic objectives.
pub struct FnObjective<F> {
    pub id: String,
    pub f: F,
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&Weights) -> f64 + Sync,
{
    fn id(&self) -> String {
        self.id.clone()
    }

    fn evaluate(&self, w: &Weights, _: SeedBlock) -> Result<Estimate, TrainerError> {
        Ok(Estimate::exact((self.f)(w)))
    }
}
