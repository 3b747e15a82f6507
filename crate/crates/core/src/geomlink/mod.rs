//! Exact straight-line embeddings of complete graphs in R³ and integer linking
//! numbers of disjoint polygonal cycles (the classical case `n = 1`).
//!
//! Every sign decision is made on integers: rational coordinates are scaled
//! by the common denominator on construction, which changes no predicate and
//! no linking number. Floating point only appears in [`gauss_linking_oracle`].

mod cycles;
mod embedding;
mod gauss;
mod projection;

pub use cycles::{
    conway_gordon_invariant, cycles_on, enumerate_disjoint_cycle_pairs, search_mod_q_link,
    CyclePair, CyclePairLink, DisjointCyclePairs,
};
pub use embedding::{random_general_position_embedding, PLEmbedding, PolygonalCycle};
pub use gauss::{gauss_linking_number_f64, gauss_linking_oracle, ORACLE_GUARD};
pub use projection::{linking_number, linking_number_with_rotation, Rotation, ROTATION_ATTEMPTS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not in general position: {0}")]
    NotGeneralPosition(String),
    #[error("cycles share vertex {0}")]
    SharedVertex(u32),
    /// The projection direction is not generic for this pair; retry under
    /// another rotation.
    #[error("degenerate projection: {0}")]
    DegenerateProjection(String),
    #[error("no generic projection among {0} rotations")]
    RotationsExhausted(usize),
    #[error("oracle inconclusive: value {value} is {distance} from the nearest integer")]
    OracleInconclusive { value: f64, distance: f64 },
}

impl GeomError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, GeomError::DegenerateProjection(_))
    }
}
