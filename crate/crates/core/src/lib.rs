//! Constructive machinery for intrinsic linking with divisibility constraints.
//!
//! The crate is organised bottom-up:
//!
//! * [`simplicial`]: facet-based oriented complexes, triangulated n-paths,
//!   prism spheres `∂(D×I)`, connect sums and D-largeness certificates.
//! * [`geomlink`]: exact straight-line embeddings of complete graphs in R³ and
//!   integer linking numbers of disjoint polygonal cycles.
//! * [`linkalg`]: abstract oriented link systems with integer linking matrices
//!   and chain arithmetic.
//! * [`selection`]: the pigeonhole and forbidden-value selection engines.
//! * [`pipelines`]: the stitching constructions that turn link systems into
//!   links whose linking numbers are nonzero multiples of `q`, plus the
//!   vertex-count bounds.

pub mod geomlink;
pub mod linkalg;
pub mod pipelines;
pub mod selection;
pub mod simplicial;

mod intser;

pub use geomlink::{GeomError, PLEmbedding, PolygonalCycle};
pub use linkalg::{Chain, LinkError, LinkSystem, LinkingVector};
pub use pipelines::{PipelineError, PipelineTrace, StitchInput, StitchOutput};
pub use selection::{PrefixFamily, SelectionError, WindowSelection};
pub use simplicial::{
    NPath, OrientedFacet, Simplex, SimplicialComplex, SimplicialError, TriangulatedSphere,
};

/// Arbitrary-precision integer used for every linking number.
pub type Int = num_bigint::BigInt;
