use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::objective::{Estimate, Objective, SeedBlock};
use super::param::Param;
use super::TrainerError;
use crate::Weights;

pub const FACTORS_PER_EXPERIMENT: usize = 4;
pub const LEVELS: [i8; 3] = [-1, 0, 1];
pub const CANDIDATES: usize = 81;

/// A 3^4 design around `base`: each chosen parameter moves by -step, 0 or +step.
#[derive(Clone, Debug)]
pub struct DesignExperiment {
    pub base: Weights,
    pub params: [Param; FACTORS_PER_EXPERIMENT],
    pub steps: [f64; FACTORS_PER_EXPERIMENT],
    pub seeds: SeedBlock,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub levels: [i8; FACTORS_PER_EXPERIMENT],
    pub values: [f64; FACTORS_PER_EXPERIMENT],
    /// False when the parameters leave the give-up curve invalid.
    pub feasible: bool,
    /// `-inf` for infeasible candidates, written as `null`.
    #[serde(with = "neg_inf_as_null")]
    pub score: f64,
    pub ci95: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub candidates: Vec<Candidate>,
    pub best: usize,
    pub saturated: bool,
    pub best_weights: Weights,
}

impl ExperimentResult {
    pub fn base_index() -> usize {
        CANDIDATES / 2
    }

    pub fn best_candidate(&self) -> &Candidate {
        &self.candidates[self.best]
    }

    pub fn base_candidate(&self) -> &Candidate {
        &self.candidates[Self::base_index()]
    }
}

mod neg_inf_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
    }
}

/// Levels of candidate `k`, first parameter varying slowest.
pub fn candidate_levels(k: usize) -> [i8; FACTORS_PER_EXPERIMENT] {
    let mut out = [0; FACTORS_PER_EXPERIMENT];
    let mut rest = k;
    for slot in out.iter_mut().rev() {
        *slot = LEVELS[rest % 3];
        rest /= 3;
    }
    out
}

impl DesignExperiment {
    pub fn validate(&self) -> Result<(), TrainerError> {
        for (i, p) in self.params.iter().enumerate() {
            if self.params[..i].contains(p) {
                return Err(TrainerError::Design(format!("parameter {p} chosen twice")));
            }
            if !p.is_trainable(&self.base) {
                return Err(TrainerError::Design(format!("parameter {p} is dominant and cannot be searched")));
            }
        }
        if let Some(s) = self.steps.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(TrainerError::Design(format!("step sizes must be positive, got {s}")));
        }
        Ok(())
    }

    pub fn candidate(&self, levels: [i8; FACTORS_PER_EXPERIMENT]) -> Weights {
        let mut w = self.base;
        for ((p, step), l) in self.params.iter().zip(self.steps).zip(levels) {
            let v = p.get(&self.base).expect("validated as trainable");
            p.set(&mut w, v + f64::from(l) * step);
        }
        w
    }
}

/// Evaluates all 81 candidates on the same seed block and picks the best.
///
/// Ties go to the base vector, then to the earliest candidate.
pub fn run_experiment(exp: &DesignExperiment, objective: &dyn Objective) -> Result<ExperimentResult, TrainerError> {
    exp.validate()?;
    let candidates: Vec<Candidate> = (0..CANDIDATES)
        .into_par_iter()
        .map(|k| {
            let levels = candidate_levels(k);
            let w = exp.candidate(levels);
            let values = exp.params.map(|p| p.get(&w).expect("finite"));
            if w.curve.validate().is_err() {
                return Ok(Candidate { levels, values, feasible: false, score: f64::NEG_INFINITY, ci95: 0.0 });
            }
            let Estimate { value, ci95 } = objective
                .evaluate(&w, exp.seeds)
                .map_err(|e| TrainerError::Candidate { levels: format!("{levels:?}"), source: Box::new(e) })?;
            Ok(Candidate { levels, values, feasible: true, score: value, ci95 })
        })
        .collect::<Result<_, TrainerError>>()?;
    let base = ExperimentResult::base_index();
    let mut best = base;
    for (k, c) in candidates.iter().enumerate() {
        if c.score > candidates[best].score {
            best = k;
        }
    }
    let best_weights = exp.candidate(candidates[best].levels);
    Ok(ExperimentResult { saturated: best == base, best, best_weights, candidates })
}
