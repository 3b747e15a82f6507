//! The constructive arguments as executable pipelines over link systems.
//!
//! The topology that is not simulated (linking numbers of the auxiliary
//! stitching spheres) enters through a deterministic [`SupplierSpec`]; the
//! arithmetic must work for every integer the supplier can return.

mod bipartite;
mod bounds;
mod keys;
mod modq;
mod stitch;
mod sublink;
mod supplier;

pub use bipartite::{
    bipartite_orchestrate, bipartite_stage_sizes, keyring_search, ExhaustiveOracle, IndexSet,
    KeyRingInstance, KeyRingOracle, KeyRingSolution, BipartiteResult, StageRecord,
    SymbolicPrefixOracle,
};
pub use bounds::{
    bound_bipartite, bound_key_q, bound_keydisc, bound_keydisc_from_counts, stitch_minimums,
    StitchMinimums,
};
pub use keys::{
    enlarge_key, enlarge_key_mod2, replay_two_component, two_component_pipeline,
    vertex_budget_check, BudgetCheck, KeyChoice, SphereRecord, TwoComponentKind, TwoComponentOutput,
    TwoComponentTrace,
};
pub use modq::{
    check_property, modq_parameters, seeded_base_system, theorem_modq_orchestrate,
    theorem_modq_run, ModqParameters, ModqStep, ModqSystem,
};
pub use stitch::{
    replay, stitch_links, StitchIds, StitchInput, StitchOutput, PipelineTrace, StitchStep,
};
pub use sublink::{
    choose_nonvanishing_base, select_sign_uniform_sublink, select_three_valued_sublink,
    stitch_consecutive, ConsecutiveStitch, PatternSelection,
};
pub use supplier::SupplierSpec;

use crate::linkalg::LinkError;
use crate::selection::SelectionError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no sign pattern reaches quota {quota} (largest bucket {largest})")]
    QuotaUnreachable { quota: usize, largest: usize },
    #[error("key ring search found no subset with |I| ≥ m/2 (best {best}, m = {m})")]
    LemmaModelFailure { m: usize, best: usize, instance: String },
    #[error("stage {stage}: oracle returned {got} indices, needed {needed}")]
    StageShortfall { stage: usize, got: String, needed: String },
    #[error("base system violates {condition}: {detail}")]
    PropertyViolation { condition: String, detail: String },
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error("system too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T, PipelineError> {
    Err(PipelineError::InvalidArgument(msg.into()))
}
