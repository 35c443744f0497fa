//! Finiteness and AF-embeddability of graph C*-algebras.
//!
//! Given a finite directed multigraph `E`, [`loops::classify`] decides
//! whether `C^*(E)` is AF, AF-embeddable but not AF, or not finite. When no
//! loop has an entrance, [`embed::embed`] replaces every loop by a Bratteli
//! tail to get a loop-free graph `F` together with a map sending the
//! generators of `C^*(E)` into `C^*(F)`. The [`symbolic`] engine proves the
//! Cuntz-Krieger relations for that map exactly, and [`numeric`] checks them
//! again in a truncated path-space representation, along with the spectrum
//! of each mapped loop.
//!
//! Paths are written range end first: `(α_n, …, α_1)` with
//! `r(α_i) = s(α_{i+1})`, and relation (3) sums over `r^{-1}(v)`.

#![no_std]

extern crate alloc;

pub mod embed;
pub mod graph;
pub mod id;
pub mod loops;
pub mod numeric;
pub mod scc;
pub mod symbolic;

pub use embed::{
    corner_dimension, embed, embed_with, materialize, AugmentedGraphSpec, BratteliTailSpec,
    EmbedError, GeneratorMap, LoopReplacement, MultiplicitySeq,
};
pub use graph::{Edge, Graph, GraphBuilder, GraphError, Path};
pub use id::{EdgeId, InvalidId, TailId, VertexId};
pub use loops::{
    classify, cycle_vertices, disjoint_simple_loops, entrance_violation, witness_infinite,
    Classification, EntranceWitness, InfiniteProjection, LoopError, SimpleLoop, Verdict,
};
