//! Meta-training of the learned strategy: an outer evolution strategy
//! searches over its parameters, scoring each candidate by inner-loop
//! rollouts on tasks shared by the whole outer population.

mod fitness;
mod rollout;
mod train;

pub use fitness::{
    meta_fitness, meta_fitness_from_minima, reference_gaps, relative_gap, rollout_min, Aggregation, ScoreTensor,
};
pub use rollout::{inner_rollout, RolloutExecutor, SequentialExecutor};
pub use train::{
    metabbo_run, selfref_init, selfref_run, GenerationPlan, MetaConfig, MetaDriver, MetaEsKind, MetaOutcome,
    MetaRecord, MetaTrainer,
};
