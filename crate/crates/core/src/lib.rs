//! Distinct degrees in induced subgraphs.
//!
//! * [`graph`]: bit-packed immutable graphs and vertex sets.
//! * [`generators`]: Turán, iterated Turán and `G(n, p)`.
//! * [`exact`]: brute-force oracles for `f(G)`, `hom(G)` and small-ball
//!   probabilities.
//! * [`distributions`]: probability vectors, random distributions over them
//!   and Monte-Carlo estimation of `bad`.
//! * [`pipeline`]: constructions turning distributions into separated sets and
//!   separated sets into genuine distinct-degree witnesses.
//! * [`random`]: the `G(n, p)` lower-bound pipeline and scaling sweeps.

pub mod distributions;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod par;
pub mod pipeline;
pub mod random;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{DegreeStats, Graph, InducedSubgraph, VertexSet};
pub use rng::Seed;
