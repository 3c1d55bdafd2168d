//! Full-factorial coordinate search over weight vectors.
//!
//! Each experiment moves four parameters by -step, 0 or +step (81 candidates),
//! scores every candidate on the same seeds and re-bases on the winner.

mod experiment;
mod objective;
mod param;
mod train;

pub use experiment::{
    candidate_levels, run_experiment, Candidate, DesignExperiment, ExperimentResult, CANDIDATES,
    FACTORS_PER_EXPERIMENT, LEVELS,
};
pub use objective::{Estimate, FnObjective, Humanness, Objective, Paired, SeedBlock, SelfPlay};
pub use param::{trainable_params, Param, NUM_PARAMS};
pub use train::{
    parse_audit, resume_training, train_to_saturation, AuditEvent, ExperimentRecord, Schedule, TrainConfig,
    TrainOutcome, AUDIT_FORMAT, AUDIT_VERSION,
};

use crate::harness::HarnessError;

#[derive(Debug, thiserror::Error)]
pub enum TrainerError {
    #[error("invalid design: {0}")]
    Design(String),
    #[error("objective failed: {0}")]
    Objective(String),
    #[error("candidate {levels}: {source}")]
    Candidate { levels: String, source: Box<TrainerError> },
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("audit trail: {0}")]
    Audit(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
