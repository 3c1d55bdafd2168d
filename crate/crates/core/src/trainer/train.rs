use serde::{Deserialize, Serialize};

use super::experiment::{run_experiment, Candidate, DesignExperiment, FACTORS_PER_EXPERIMENT};
use super::objective::{Objective, SeedBlock};
use super::param::{trainable_params, Param};
use super::TrainerError;
use crate::Weights;

pub const AUDIT_FORMAT: &str = "cyclone-audit";
pub const AUDIT_VERSION: u32 = 1;

/// Groups of four parameters searched together, visited in order each round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub groups: Vec<[Param; FACTORS_PER_EXPERIMENT]>,
}

impl Schedule {
    /// Trainable parameters in table order (play, discard, conventions, curve),
    /// cut into groups of four; the last group wraps around to the start.
    pub fn round_robin(w: &Weights) -> Result<Schedule, TrainerError> {
        Schedule::chunked(&trainable_params(w))
    }

    pub fn chunked(params: &[Param]) -> Result<Schedule, TrainerError> {
        if params.len() < FACTORS_PER_EXPERIMENT {
            return Err(TrainerError::Design(format!(
                "need at least {FACTORS_PER_EXPERIMENT} trainable parameters, have {}",
                params.len()
            )));
        }
        let n = params.len().div_ceil(FACTORS_PER_EXPERIMENT);
        let groups =
            (0..n).map(|g| std::array::from_fn(|k| params[(g * FACTORS_PER_EXPERIMENT + k) % params.len()])).collect();
        Ok(Schedule { groups })
    }

    /// Every trainable parameter of `w` appears, and no group repeats or fixes a dominant one.
    pub fn validate(&self, w: &Weights) -> Result<(), TrainerError> {
        if self.groups.is_empty() {
            return Err(TrainerError::Design("schedule has no groups".into()));
        }
        for g in &self.groups {
            for (i, p) in g.iter().enumerate() {
                if g[..i].contains(p) {
                    return Err(TrainerError::Design(format!("parameter {p} repeated within a group")));
                }
                if !p.is_trainable(w) {
                    return Err(TrainerError::Design(format!("parameter {p} is dominant and cannot be searched")));
                }
            }
        }
        if let Some(p) = trainable_params(w).into_iter().find(|p| !self.groups.iter().any(|g| g.contains(p))) {
            return Err(TrainerError::Design(format!("schedule never visits {p}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub seeds: SeedBlock,
    /// Step = max(min_step, relative_step * |value|) before halving.
    pub min_step: f64,
    pub relative_step: f64,
    /// How many times the steps are halved after a round without improvement.
    pub refinements: u32,
    pub max_rounds: usize,
    pub max_experiments: Option<usize>,
    /// The winner must beat the base by more than this to count as progress.
    pub min_improvement: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            seeds: SeedBlock { base: 1, games: 200 },
            min_step: 0.25,
            relative_step: 0.25,
            refinements: 2,
            max_rounds: 50,
            max_experiments: None,
            min_improvement: 0.0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainerError> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !(ok(self.min_step) && ok(self.relative_step) && ok(self.min_improvement)) {
            return Err(TrainerError::Design("step settings must be finite and non-negative".into()));
        }
        if self.min_step == 0.0 && self.relative_step == 0.0 {
            return Err(TrainerError::Design("steps would be zero".into()));
        }
        if self.max_rounds == 0 {
            return Err(TrainerError::Design("max_rounds must be at least 1".into()));
        }
        Ok(())
    }

    pub fn step(&self, value: f64, halvings: u32) -> f64 {
        self.min_step.max(self.relative_step * value.abs()) * 0.5f64.powi(halvings as i32)
    }
}

/// One line of the audit trail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AuditEvent {
    Start {
        format: String,
        version: u32,
        objective: String,
        config: TrainConfig,
        schedule: Schedule,
        /// Weight file text of the starting vector.
        start: String,
    },
    Experiment(ExperimentRecord),
    Finish {
        experiments: usize,
        rounds: usize,
        saturated: bool,
        capped: bool,
        weights: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub index: usize,
    pub round: usize,
    pub group: usize,
    pub halvings: u32,
    pub seeds: SeedBlock,
    pub params: [Param; FACTORS_PER_EXPERIMENT],
    pub steps: [f64; FACTORS_PER_EXPERIMENT],
    pub candidates: Vec<Candidate>,
    pub best: usize,
    pub saturated: bool,
    pub improved: bool,
    /// Values of the four parameters after re-basing.
    pub next: [f64; FACTORS_PER_EXPERIMENT],
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainOutcome {
    pub weights: Weights,
    pub experiments: usize,
    pub rounds: usize,
    /// True when the search stopped because no move improved at any step size.
    pub saturated: bool,
    /// True when a round or experiment cap stopped the search first.
    pub capped: bool,
}

#[derive(Clone, Copy, Debug)]
struct Progress {
    weights: Weights,
    experiments: usize,
    round: usize,
    group: usize,
    halvings: u32,
    improved_this_round: bool,
}

/// Repeats 3^4 experiments, re-basing on each winner, until a full round at every
/// step size finds nothing better. An improving round resets the step size.
///
/// `sink` receives every audit event as it happens.
pub fn train_to_saturation(
    start: &Weights,
    schedule: &Schedule,
    objective: &dyn Objective,
    config: &TrainConfig,
    sink: &mut dyn FnMut(&AuditEvent) -> Result<(), TrainerError>,
) -> Result<TrainOutcome, TrainerError> {
    config.validate()?;
    schedule.validate(start)?;
    sink(&AuditEvent::Start {
        format: AUDIT_FORMAT.into(),
        version: AUDIT_VERSION,
        objective: objective.id(),
        config: config.clone(),
        schedule: schedule.clone(),
        start: start.to_toml(None),
    })?;
    let progress =
        Progress { weights: *start, experiments: 0, round: 0, group: 0, halvings: 0, improved_this_round: false };
    drive(progress, schedule, objective, config, sink)
}

/// Continues a run from an audit trail, starting after its last complete experiment.
/// A trail that already ends in `finish` returns that result.
pub fn resume_training(
    audit: &str,
    objective: &dyn Objective,
    sink: &mut dyn FnMut(&AuditEvent) -> Result<(), TrainerError>,
) -> Result<TrainOutcome, TrainerError> {
    let events = parse_audit(audit)?;
    let Some(AuditEvent::Start { objective: id, config, schedule, start, .. }) = events.first() else {
        return Err(TrainerError::Audit("trail does not begin with a start record".into()));
    };
    if *id != objective.id() {
        return Err(TrainerError::Audit(format!("trail was written for objective {id}, not {}", objective.id())));
    }
    let start = Weights::from_toml(start).map_err(|e| TrainerError::Audit(e.to_string()))?;
    schedule.validate(&start)?;
    let mut progress =
        Progress { weights: start, experiments: 0, round: 0, group: 0, halvings: 0, improved_this_round: false };
    for event in &events[1..] {
        match event {
            AuditEvent::Experiment(r) => {
                if r.index != progress.experiments {
                    return Err(TrainerError::Audit(format!("experiment {} out of sequence", r.index)));
                }
                for (p, v) in r.params.iter().zip(r.next) {
                    p.set(&mut progress.weights, v);
                }
                progress.experiments += 1;
                progress.improved_this_round |= r.improved;
                (progress.round, progress.group, progress.halvings) = (r.round, r.group, r.halvings);
                advance(&mut progress, schedule, config);
            }
            AuditEvent::Finish { experiments, rounds, saturated, capped, .. } => {
                return Ok(TrainOutcome {
                    weights: progress.weights,
                    experiments: *experiments,
                    rounds: *rounds,
                    saturated: *saturated,
                    capped: *capped,
                });
            }
            AuditEvent::Start { .. } => return Err(TrainerError::Audit("second start record".into())),
        }
    }
    drive(progress, schedule, objective, config, sink)
}

pub fn parse_audit(text: &str) -> Result<Vec<AuditEvent>, TrainerError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<AuditEvent>(line) {
            Ok(e) => out.push(e),
            // A torn final line from an interrupted run is dropped.
            Err(_) if n + 1 == text.lines().count() && !text.ends_with('\n') => break,
            Err(e) => return Err(TrainerError::Audit(format!("line {}: {e}", n + 1))),
        }
    }
    if let Some(AuditEvent::Start { format, version, .. }) = out.first() {
        if format != AUDIT_FORMAT || *version != AUDIT_VERSION {
            return Err(TrainerError::Audit(format!("unsupported trail {format} v{version}")));
        }
    }
    Ok(out)
}

/// Moves to the next group; at the end of a round decides whether to refine.
/// Leaves `group == groups.len()` when the search is finished.
fn advance(p: &mut Progress, schedule: &Schedule, config: &TrainConfig) {
    p.group += 1;
    if p.group < schedule.groups.len() {
        return;
    }
    if p.improved_this_round {
        p.halvings = 0;
    } else if p.halvings < config.refinements {
        p.halvings += 1;
    } else {
        return;
    }
    p.group = 0;
    p.round += 1;
    p.improved_this_round = false;
}

fn drive(
    mut p: Progress,
    schedule: &Schedule,
    objective: &dyn Objective,
    config: &TrainConfig,
    sink: &mut dyn FnMut(&AuditEvent) -> Result<(), TrainerError>,
) -> Result<TrainOutcome, TrainerError> {
    let mut capped = false;
    while p.group < schedule.groups.len() {
        if p.round >= config.max_rounds || config.max_experiments.is_some_and(|m| p.experiments >= m) {
            capped = true;
            break;
        }
        let params = schedule.groups[p.group];
        let steps = params.map(|q| config.step(q.get(&p.weights).expect("validated"), p.halvings));
        let exp = DesignExperiment { base: p.weights, params, steps, seeds: config.seeds };
        let result = run_experiment(&exp, objective)?;
        let gain = result.best_candidate().score - result.base_candidate().score;
        let improved = !result.saturated && gain > config.min_improvement;
        if improved {
            p.weights = result.best_weights;
        }
        let record = ExperimentRecord {
            index: p.experiments,
            round: p.round,
            group: p.group,
            halvings: p.halvings,
            seeds: config.seeds,
            params,
            steps,
            best: result.best,
            saturated: result.saturated,
            improved,
            next: params.map(|q| q.get(&p.weights).expect("finite")),
            candidates: result.candidates,
        };
        sink(&AuditEvent::Experiment(record))?;
        p.experiments += 1;
        p.improved_this_round |= improved;
        advance(&mut p, schedule, config);
    }
    let outcome = TrainOutcome {
        weights: p.weights,
        experiments: p.experiments,
        rounds: p.round + 1,
        saturated: !capped,
        capped,
    };
    sink(&AuditEvent::Finish {
        experiments: outcome.experiments,
        rounds: outcome.rounds,
        saturated: outcome.saturated,
        capped,
        weights: outcome.weights.to_toml(None),
    })?;
    Ok(outcome)
}
