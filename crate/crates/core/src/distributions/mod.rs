//! Probability vectors over vertices, the four distribution constructors,
//! expected degrees under random vertex retention, and `bad`.

mod bad;
mod spec;

pub use bad::{
    bad_cross, bad_sum, estimate_bad, BadEstimate, BadEstimator, DegreeBatch, DEFAULT_TRIALS, MIN_TRIALS,
};
pub use spec::DistributionSpec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Retention probability `p_v` for each vertex of `domain`.
///
/// Values are stored densely over the whole universe; entries outside the
/// domain are zero and never read.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector {
    domain: VertexSet,
    values: Vec<f64>,
}

impl ProbVector {
    pub fn new(domain: VertexSet, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.universe() {
            return Err(Error::InvalidDomain(format!(
                "{} values for a universe of {}",
                values.len(),
                domain.universe()
            )));
        }
        let mut values = values;
        for (v, x) in values.iter_mut().enumerate() {
            if domain.contains(v) {
                if !(0.0..=1.0).contains(x) {
                    return Err(Error::InvalidParams(format!("p[{v}] = {x} outside [0, 1]")));
                }
            } else {
                *x = 0.0;
            }
        }
        Ok(ProbVector { domain, values })
    }

    pub fn constant(domain: VertexSet, p: f64) -> Result<Self> {
        let values = (0..domain.universe()).map(|v| if domain.contains(v) { p } else { 0.0 }).collect();
        ProbVector::new(domain, values)
    }

    pub fn domain(&self) -> &VertexSet {
        &self.domain
    }

    pub fn get(&self, v: usize) -> Option<f64> {
        self.domain.contains(v).then(|| self.values[v])
    }

    /// Dense values over the universe, zero off the domain.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sets `p_v`, adding `v` to the domain.
    pub fn set(&mut self, v: usize, p: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!("p[{v}] = {p} outside [0, 1]")));
        }
        self.domain.insert(v);
        self.values[v] = p;
        Ok(())
    }
}

/// `E[d^S(u)] = Σ_{v ∈ N(u) ∩ S} p_v` when each vertex `v` is kept with
/// probability `p_v`.
pub fn expected_degree(g: &Graph, p: &ProbVector, u: usize, s_set: &VertexSet) -> Result<f64> {
    if !s_set.is_subset(p.domain()) {
        return Err(Error::InvalidDomain("S is not covered by the probability vector".into()));
    }
    Ok(expected_degree_dense(g, p.values(), u, s_set))
}

#[inline]
pub(crate) fn expected_degree_dense(g: &Graph, values: &[f64], u: usize, s_set: &VertexSet) -> f64 {
    g.neighbors_in(u, s_set).map(|v| values[v]).sum()
}

/// Whether all pairs of `U` have expected degrees at least `gap` apart,
/// counting every vertex of `p`'s domain.
pub fn is_separated(g: &Graph, p: &ProbVector, u_set: &VertexSet, gap: f64) -> bool {
    if gap <= 0.0 {
        return true;
    }
    let mut degs: Vec<f64> = u_set.iter().map(|u| expected_degree_dense(g, p.values(), u, p.domain())).collect();
    degs.sort_by(f64::total_cmp);
    degs.windows(2).all(|w| w[1] - w[0] >= gap)
}

/// A distribution on `[0.1, 0.9]^T` for a vertex set `T`.
#[derive(Clone, Debug, PartialEq)]
pub enum Distribution {
    /// The constant vector `½` on the set.
    Trivial(VertexSet),
    /// `α` on every vertex of the set, `α ~ U[0.1, 0.9]`.
    UniformConstant(VertexSet),
    /// `½ + Σ_{u ∈ centres} α_u 𝟏_{N(u) ∩ support}`, `α_u ~ U[−β, β]`,
    /// clamped to `[0.1, 0.9]` after summing.
    Blended {
        centres: VertexSet,
        support: VertexSet,
        beta: f64,
    },
    /// Independent children on pairwise disjoint domains.
    Product(Vec<Distribution>),
}

pub const P_MIN: f64 = 0.1;
pub const P_MAX: f64 = 0.9;

impl Distribution {
    pub fn trivial(set: VertexSet) -> Self {
        Distribution::Trivial(set)
    }

    pub fn uniform_constant(set: VertexSet) -> Self {
        Distribution::UniformConstant(set)
    }

    pub fn blended(centres: VertexSet, support: VertexSet, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 0.4) {
            return Err(Error::InvalidParams(format!("blend width {beta} outside (0, 0.4]")));
        }
        if centres.universe() != support.universe() {
            return Err(Error::InvalidDomain("centres and support over different universes".into()));
        }
        Ok(Distribution::Blended {
            centres,
            support,
            beta,
        })
    }

    pub fn product(children: Vec<Distribution>) -> Result<Self> {
        let mut seen: Option<VertexSet> = None;
        for c in &children {
            let d = c.domain();
            match &mut seen {
                None => seen = Some(d),
                Some(s) => {
                    if s.universe() != d.universe() {
                        return Err(Error::InvalidDomain("product children over different universes".into()));
                    }
                    if !s.is_disjoint(&d) {
                        return Err(Error::InvalidDomain("product children overlap".into()));
                    }
                    s.union_with(&d);
                }
            }
        }
        if children.is_empty() {
            return Err(Error::InvalidDomain("empty product".into()));
        }
        Ok(Distribution::Product(children))
    }

    /// Size of the vertex universe the distribution lives in.
    pub fn universe(&self) -> usize {
        match self {
            Distribution::Trivial(s) | Distribution::UniformConstant(s) => s.universe(),
            Distribution::Blended { support, .. } => support.universe(),
            Distribution::Product(c) => c[0].universe(),
        }
    }

    /// Coordinates the distribution assigns.
    pub fn domain(&self) -> VertexSet {
        match self {
            Distribution::Trivial(s) | Distribution::UniformConstant(s) => s.clone(),
            Distribution::Blended { support, .. } => support.clone(),
            Distribution::Product(children) => {
                let mut d = VertexSet::new(self.universe());
                for c in children {
                    d.union_with(&c.domain());
                }
                d
            }
        }
    }

    /// Extends the domain to every vertex by a trivial factor on the rest.
    pub fn completed(self) -> Self {
        let rest = self.domain().complement();
        if rest.is_empty() {
            self
        } else {
            match self {
                Distribution::Product(mut children) => {
                    children.push(Distribution::Trivial(rest));
                    Distribution::Product(children)
                }
                other => Distribution::Product(vec![other, Distribution::Trivial(rest)]),
            }
        }
    }

    /// Number of leaf factors.
    pub fn leaves(&self) -> usize {
        match self {
            Distribution::Product(c) => c.iter().map(Distribution::leaves).sum(),
            _ => 1,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, g: &Graph, rng: &mut R) -> Result<ProbVector> {
        if self.universe() != g.n() {
            return Err(Error::InvalidDomain(format!(
                "distribution over {} vertices used with a graph on {}",
                self.universe(),
                g.n()
            )));
        }
        let mut values = vec![0.0; g.n()];
        self.sample_into(g, rng, &mut values);
        Ok(ProbVector {
            domain: self.domain(),
            values,
        })
    }

    /// Writes one sample into `out` on this distribution's domain only.
    pub(crate) fn sample_into<R: Rng + ?Sized>(&self, g: &Graph, rng: &mut R, out: &mut [f64]) {
        match self {
            Distribution::Trivial(s) => s.iter().for_each(|v| out[v] = 0.5),
            Distribution::UniformConstant(s) => {
                let alpha = P_MIN + (P_MAX - P_MIN) * rng.gen::<f64>();
                s.iter().for_each(|v| out[v] = alpha);
            }
            Distribution::Blended {
                centres,
                support,
                beta,
            } => {
                support.iter().for_each(|v| out[v] = 0.5);
                for u in centres {
                    let alpha = beta * (2.0 * rng.gen::<f64>() - 1.0);
                    for v in g.neighbors_in(u, support) {
                        out[v] += alpha;
                    }
                }
                support.iter().for_each(|v| out[v] = out[v].clamp(P_MIN, P_MAX));
            }
            Distribution::Product(children) => children.iter().for_each(|c| c.sample_into(g, rng, out)),
        }
    }
}
