use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{expected_degree_dense, Distribution};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::par;
use crate::rng::Seed;

pub const DEFAULT_TRIALS: usize = 20_000;
pub const MIN_TRIALS: usize = 1_000;

/// Monte-Carlo estimate of a small-ball probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadEstimate {
    pub value: f64,
    pub trials: usize,
    /// Binomial standard error at the maximizing window.
    pub std_err: f64,
}

impl BadEstimate {
    fn from_count(hits: usize, trials: usize) -> Self {
        let q = hits as f64 / trials as f64;
        BadEstimate {
            value: q,
            trials,
            std_err: (q * (1.0 - q) / trials as f64).sqrt(),
        }
    }
}

/// Settings shared by all `bad` estimates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadEstimator {
    pub trials: usize,
    /// Half-width of the window around the shift `c`.
    pub half_width: f64,
}

impl Default for BadEstimator {
    fn default() -> Self {
        BadEstimator {
            trials: DEFAULT_TRIALS,
            half_width: 1.0,
        }
    }
}

impl BadEstimator {
    pub fn new(trials: usize) -> Result<Self> {
        let e = BadEstimator {
            trials,
            ..Default::default()
        };
        e.validate()?;
        Ok(e)
    }

    pub fn with_half_width(mut self, half_width: f64) -> Self {
        self.half_width = half_width;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials < MIN_TRIALS {
            return Err(Error::InsufficientTrials {
                trials: self.trials,
                min: MIN_TRIALS,
            });
        }
        if self.half_width.is_nan() || self.half_width < 0.0 {
            return Err(Error::InvalidParams(format!("window half-width {}", self.half_width)));
        }
        Ok(())
    }

    /// Draws one shared sample batch of expected degrees to `S` for `vertices`.
    pub fn batch(
        &self,
        dist: &Distribution,
        g: &Graph,
        vertices: &[usize],
        s_set: &VertexSet,
        seed: Seed,
    ) -> Result<DegreeBatch> {
        self.validate()?;
        if dist.universe() != g.n() || s_set.universe() != g.n() {
            return Err(Error::InvalidDomain("distribution, graph and S disagree on n".into()));
        }
        if !s_set.is_subset(&dist.domain()) {
            return Err(Error::InvalidDomain("S is not covered by the distribution".into()));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= g.n()) {
            return Err(Error::InvalidPair(format!("vertex {v} out of range")));
        }
        let m = vertices.len();
        let rows = par::map_indexed_with(
            self.trials,
            || vec![0.0; g.n()],
            |scratch, t| {
                let mut rng = seed.child(t as u64).rng();
                dist.sample_into(g, &mut rng, scratch);
                vertices
                    .iter()
                    .map(|&u| expected_degree_dense(g, scratch, u, s_set))
                    .collect::<Vec<_>>()
            },
        );
        Ok(DegreeBatch {
            vertices: vertices.to_vec(),
            width: m,
            values: rows.into_iter().flatten().collect(),
            trials: self.trials,
            half_width: self.half_width,
        })
    }

    pub fn estimate(
        &self,
        dist: &Distribution,
        g: &Graph,
        u: usize,
        v: usize,
        s_set: &VertexSet,
        seed: Seed,
    ) -> Result<BadEstimate> {
        if u == v {
            return Err(Error::InvalidPair(format!("bad of {u} with itself")));
        }
        Ok(self.batch(dist, g, &[u, v], s_set, seed)?.pair(0, 1))
    }
}

/// Expected degrees to a fixed `S` of several vertices, one row per sampled
/// probability vector. Every pair estimate reads the same rows.
#[derive(Clone, Debug)]
pub struct DegreeBatch {
    vertices: Vec<usize>,
    width: usize,
    values: Vec<f64>,
    trials: usize,
    half_width: f64,
}

impl DegreeBatch {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    /// Expected degree of the `i`-th vertex in trial `t`.
    pub fn value(&self, t: usize, i: usize) -> f64 {
        self.values[t * self.width + i]
    }

    /// `bad` of the `i`-th and `j`-th vertices of the batch.
    pub fn pair(&self, i: usize, j: usize) -> BadEstimate {
        let mut diffs: Vec<f64> = (0..self.trials).map(|t| self.value(t, i) - self.value(t, j)).collect();
        let hits = max_window(&mut diffs, self.half_width);
        BadEstimate::from_count(hits, self.trials)
    }

    /// Sum of `bad` over unordered pairs of the batch indices in `group`.
    pub fn sum_within(&self, group: &[usize]) -> f64 {
        let pairs: Vec<(usize, usize)> = group
            .iter()
            .enumerate()
            .flat_map(|(a, &i)| group[a + 1..].iter().map(move |&j| (i, j)))
            .collect();
        par::map_indexed(pairs.len(), |k| self.pair(pairs[k].0, pairs[k].1).value)
            .into_iter()
            .sum()
    }

    /// Sum of `bad` over `left × right`, skipping coincident vertices.
    pub fn sum_across(&self, left: &[usize], right: &[usize]) -> f64 {
        let pairs: Vec<(usize, usize)> = left
            .iter()
            .flat_map(|&i| right.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| self.vertices[i] != self.vertices[j])
            .collect();
        par::map_indexed(pairs.len(), |k| self.pair(pairs[k].0, pairs[k].1).value)
            .into_iter()
            .sum()
    }
}

/// Largest number of samples inside a closed window of width `2w`. Samples
/// are sorted in place; positions closer than a relative `1e-9` count as
/// equal.
pub(crate) fn max_window(samples: &mut [f64], w: f64) -> usize {
    if samples.is_empty() {
        return 0;
    }
    samples.sort_unstable_by(f64::total_cmp);
    let scale = samples.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let reach = 2.0 * w + 1e-9 * scale;
    let mut best = 0;
    let mut right = 0;
    for left in 0..samples.len() {
        while right + 1 < samples.len() && samples[right + 1] - samples[left] <= reach {
            right += 1;
        }
        best = best.max(right + 1 - left);
    }
    best
}

/// `bad^S(u, v)` for `dist` with `trials` samples seeded from `rng`.
pub fn estimate_bad<R: Rng + ?Sized>(
    dist: &Distribution,
    g: &Graph,
    u: usize,
    v: usize,
    s_set: &VertexSet,
    trials: usize,
    rng: &mut R,
) -> Result<BadEstimate> {
    BadEstimator::new(trials)?.estimate(dist, g, u, v, s_set, Seed::draw(rng))
}

/// `Σ bad^S(u, v)` over unordered pairs of `U`.
pub fn bad_sum<R: Rng + ?Sized>(
    dist: &Distribution,
    g: &Graph,
    u_set: &VertexSet,
    s_set: &VertexSet,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let est = BadEstimator::new(trials)?;
    let seed = Seed::draw(rng);
    if u_set.len() < 2 {
        return Ok(0.0);
    }
    let members = u_set.to_vec();
    let batch = est.batch(dist, g, &members, s_set, seed)?;
    Ok(batch.sum_within(&(0..members.len()).collect::<Vec<_>>()))
}

/// `Σ bad^S(u, v)` over `u ∈ U`, `v ∈ V`.
pub fn bad_cross<R: Rng + ?Sized>(
    dist: &Distribution,
    g: &Graph,
    u_set: &VertexSet,
    v_set: &VertexSet,
    s_set: &VertexSet,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let est = BadEstimator::new(trials)?;
    let seed = Seed::draw(rng);
    let mut members = u_set.to_vec();
    let split = members.len();
    members.extend(v_set.iter());
    let batch = est.batch(dist, g, &members, s_set, seed)?;
    let left: Vec<usize> = (0..split).collect();
    let right: Vec<usize> = (split..members.len()).collect();
    Ok(batch.sum_across(&left, &right))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_indices(n, v.iter().copied()).unwrap()
    }

    #[test]
    fn window_counts() {
        assert_eq!(max_window(&mut [0.0, 0.5, 2.0, 2.1, 5.0], 1.0), 3);
        assert_eq!(max_window(&mut [3.0; 10], 0.0), 10);
        assert_eq!(max_window(&mut [0.0, 1.0, 2.0], 0.0), 1);
        assert_eq!(max_window(&mut [], 1.0), 0);
    }

    #[test]
    fn trivial_distribution_is_fully_bad() {
        let g = crate::generators::gnp(20, 0.5, Seed(1)).unwrap();
        let d = Distribution::trivial(g.vertices());
        let e = estimate_bad(&d, &g, 0, 1, &g.vertices(), 1000, &mut Seed(2).rng()).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.std_err, 0.0);
        let s = bad_sum(&d, &g, &set(20, &[0, 1, 2, 3]), &g.vertices(), 1000, &mut Seed(3).rng()).unwrap();
        assert_eq!(s, 6.0);
        let c = bad_cross(&d, &g, &set(20, &[0, 1]), &set(20, &[1, 2, 3]), &g.vertices(), 1000, &mut Seed(3).rng())
            .unwrap();
        assert_eq!(c, 5.0);
    }

    #[test]
    fn singleton_sum_is_zero() {
        let g = Graph::complete(4);
        let d = Distribution::trivial(g.vertices());
        assert_eq!(bad_sum(&d, &g, &set(4, &[2]), &g.vertices(), 1000, &mut Seed(0).rng()).unwrap(), 0.0);
    }

    #[test]
    fn too_few_trials() {
        let g = Graph::complete(4);
        let d = Distribution::trivial(g.vertices());
        assert!(matches!(
            estimate_bad(&d, &g, 0, 1, &g.vertices(), 999, &mut Seed(0).rng()),
            Err(Error::InsufficientTrials { .. })
        ));
    }

    #[test]
    fn symmetric_in_the_pair() {
        let g = crate::generators::gnp(30, 0.5, Seed(4)).unwrap();
        let d = Distribution::blended(g.vertices(), g.vertices(), 0.05).unwrap();
        let e = BadEstimator::new(2000).unwrap();
        let a = e.estimate(&d, &g, 3, 7, &g.vertices(), Seed(9)).unwrap();
        let b = e.estimate(&d, &g, 7, 3, &g.vertices(), Seed(9)).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn uniform_constant_gap_ten() {
        // u sees 10 more vertices of S than v: X = 10α, α ~ U[0.1, 0.9]
        let n = 12;
        let g = Graph::from_edges(n, (2..12).map(|v| (0, v))).unwrap();
        let s = VertexSet::from_indices(n, 2..12).unwrap();
        let d = Distribution::uniform_constant(s.clone()).completed();
        let e = estimate_bad(&d, &g, 0, 1, &s, 100_000, &mut Seed(5).rng()).unwrap();
        assert!((e.value - 0.25).abs() <= 0.02, "{e:?}");
    }
}
