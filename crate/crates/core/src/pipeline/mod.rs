//! Constructions linking three views of "many distinct degrees":
//!
//! * a set `U` with a distribution `𝒟` for which `bad(U)` is small,
//! * a probability vector `p` under which `U` has well separated expected
//!   degrees,
//! * an actual induced subgraph `G[S]` in which `U` has distinct degrees.
//!
//! Every witness is re-verified against the graph before it is returned.

mod build;
mod convert;
mod search;

pub use build::{
    bounded_degree_construct, diverse_blended, diversity_graph, nt_construct, regularize, BoundedDegree,
};
pub(crate) use convert::sample_retained;
pub use convert::{bad_to_separated, distinct_to_distribution, separated_to_distinct, turan_independent_set};
pub use search::{find_distinct_degrees, FoundWitness, Method};

use serde::{Deserialize, Serialize};

use crate::distributions::{is_separated, Distribution, ProbVector};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Vertices `U ⊆ S` whose degrees in `G[S]` are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctWitness {
    s: VertexSet,
    u: VertexSet,
}

impl DistinctWitness {
    /// Checks the witness against `g` by recounting degrees.
    pub fn new(g: &Graph, s: VertexSet, u: VertexSet) -> Result<Self> {
        if s.universe() != g.n() || u.universe() != g.n() {
            return Err(Error::InvalidWitness("sets do not match the graph".into()));
        }
        if u.is_empty() {
            return Err(Error::InvalidWitness("empty U".into()));
        }
        if !u.is_subset(&s) {
            return Err(Error::InvalidWitness("U is not contained in S".into()));
        }
        if !g.has_distinct_degrees(&s, &u) {
            return Err(Error::InvalidWitness("degrees in G[S] are not distinct on U".into()));
        }
        Ok(DistinctWitness { s, u })
    }

    /// The one-vertex witness `({v}, {v})`.
    pub fn singleton(g: &Graph, v: usize) -> Result<Self> {
        let s = VertexSet::from_indices(g.n(), [v])?;
        DistinctWitness::new(g, s.clone(), s)
    }

    pub fn s(&self) -> &VertexSet {
        &self.s
    }

    pub fn u(&self) -> &VertexSet {
        &self.u
    }

    pub fn k(&self) -> usize {
        self.u.len()
    }

    /// Re-runs the distinctness check.
    pub fn verify(&self, g: &Graph) -> bool {
        self.u.is_subset(&self.s) && g.has_distinct_degrees(&self.s, &self.u)
    }
}

/// A probability vector together with a set whose expected degrees are
/// pairwise at least `gap` apart.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatedWitness {
    p: ProbVector,
    u: VertexSet,
    gap: f64,
}

impl SeparatedWitness {
    pub fn new(g: &Graph, p: ProbVector, u: VertexSet, gap: f64) -> Result<Self> {
        if !is_separated(g, &p, &u, gap) {
            return Err(Error::InvalidWitness(format!("U is not {gap}-separated")));
        }
        Ok(SeparatedWitness { p, u, gap })
    }

    pub fn p(&self) -> &ProbVector {
        &self.p
    }

    pub fn u(&self) -> &VertexSet {
        &self.u
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

/// One step taken while building a construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// A diverse set was found and blended.
    Diverse { size: usize },
    /// Bounded-degree greedy on the low (or, with `complement`, high) side.
    BoundedDegree { k: usize, complement: bool },
    /// Dense-regime construction via the diversity graph.
    Dense { case: u8, size: usize },
    /// Split around a large cluster and recursed on both sides.
    Split { high: usize, low: usize },
    /// Too small to recurse: an arbitrary pair or singleton.
    Leaf { size: usize },
}

/// A set `U` with a distribution over all vertices meant to keep `bad(U)`
/// small.
#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub u: VertexSet,
    pub distribution: Distribution,
    pub steps: Vec<Step>,
    /// Estimated `bad(U)` when verification ran.
    pub bad_sum: Option<f64>,
}

/// Tunables for the constructions. Defaults follow the proofs where those
/// are usable at desk scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Diverse-set threshold is `diverse_factor · k^{3/2}`.
    pub diverse_factor: f64,
    /// Cluster centres with degree in `[w k^{3/2}, n − 1 − w k^{3/2}]` are
    /// mid-range.
    pub mid_window: f64,
    /// The low side keeps degrees `≤ side_window · k^{3/2}`.
    pub side_window: f64,
    /// A cluster is large when it has at least `cluster_factor · k` vertices.
    pub cluster_factor: f64,
    /// High half of a split: `d^V ≥ split_high · k`.
    pub split_high: f64,
    /// Low half of a split: `d^V ≤ split_low · k`.
    pub split_low: f64,
    /// Accept `U` when `bad(U) ≤ bad_slack · |U| · log₂(|U| + 1)`.
    pub bad_slack: f64,
    pub max_depth: usize,
    /// Enables the dense-regime branch when `n < dense_threshold · k^{5/2}`.
    pub dense_branch: bool,
    pub dense_threshold: f64,
    /// `ε` of the diversity graph.
    pub diversity_eps: f64,
    /// Vertices with diversity-graph degree `≤ m / (s1_divisor · k)` are sparse.
    pub s1_divisor: f64,
    /// Retries for the random set selections of the dense branch.
    pub w_retries: usize,
    /// Size `t` of each control set in the dense branch. `None` derives it
    /// from `k`, never below `min_control_size`.
    pub control_size: Option<usize>,
    pub min_control_size: usize,
    /// Samples tried when converting between witnesses.
    pub attempts: usize,
    /// Estimate `bad(U)` and reject constructions over the bound.
    pub verify_bad: bool,
    pub bad_trials: usize,
    /// Targets tried by the search; empty means a geometric ladder up to `n`.
    pub k_ladder: Vec<usize>,
    /// Random restarts of the local search.
    pub greedy_restarts: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            diverse_factor: 2.0,
            mid_window: 10.0,
            side_window: 12.0,
            cluster_factor: 3.0,
            split_high: 2.0,
            split_low: 1.0,
            bad_slack: 8.0,
            max_depth: 12,
            dense_branch: false,
            dense_threshold: 1000.0,
            diversity_eps: 1.0 / 48.0,
            s1_divisor: 600.0,
            w_retries: 16,
            control_size: None,
            min_control_size: 6,
            attempts: 16,
            verify_bad: true,
            bad_trials: crate::distributions::DEFAULT_TRIALS,
            k_ladder: Vec::new(),
            greedy_restarts: 8,
        }
    }
}

impl PipelineConfig {
    /// `bad_slack · |U| · log₂(|U| + 1)`.
    pub fn bad_bound(&self, size: usize) -> f64 {
        self.bad_slack * size as f64 * ((size + 1) as f64).log2()
    }
}
