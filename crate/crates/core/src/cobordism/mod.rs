//! Block kinds, plan generators, plan files, and the independent verifier.

mod block;
mod generate;
mod moves;
mod plan;
mod verify;

pub use block::{Block, BlockKind, MoveEndpoint, MoveTwist, RegluingForm};
pub use generate::{lantern_assembly, plan_cobordism, plan_surface_bundle, plan_torus_bundle};
pub use moves::{sequence_from_toml, MoveSequence, MoveStep};
pub use plan::{compose, Gluing, Plan, RelabelEntry, SlotRef};
pub use verify::{verify, BlockCheck, GluingCheck, VerificationReport, VerifyStatus};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("monodromy word is empty; identity bundles are capped directly by a product block")]
    EmptyMonodromy,
    #[error("chart genus {genus} is below 2; torus monodromies have their own planner")]
    GenusTooSmall { genus: usize },
    #[error("invalid block: {reason}")]
    InvalidBlock { reason: String },
    #[error("duplicate block id {id:?}")]
    DuplicateBlockId { id: String },
    #[error("chart name {name:?} is already bound to a different chart")]
    ChartConflict { name: String },
    #[error("slot {slot} is not residual")]
    SlotNotResidual { slot: String },
    #[error("gluing {a} <-> {b} rejected: {reason}")]
    WitnessFailed {
        a: String,
        b: String,
        reason: String,
    },
    #[error("malformed move sequence: {reason}")]
    MalformedSequence { reason: String },
    #[error("cannot read plan file: {reason}")]
    PlanFile { reason: String },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Word(#[from] crate::mcg::McgError),
    #[error(transparent)]
    TorusWord(#[from] crate::sl2z::Sl2zError),
    #[error(transparent)]
    Glue(#[from] crate::bundles::GlueError),
}
