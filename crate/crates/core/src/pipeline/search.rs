use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::build::nt_construct;
use super::convert::{bad_to_separated, distinct_representatives, separated_to_distinct};
use super::{Construction, DistinctWitness, PipelineConfig};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::par;
use crate::rng::Seed;

/// Which route produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    NtConstruct,
    Greedy,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::NtConstruct => "nt_construct",
            Method::Greedy => "greedy",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoundWitness {
    pub witness: DistinctWitness,
    pub method: Method,
    /// Seed of the run that produced the witness.
    pub seed: Seed,
}

/// Best distinct-degree witness found by the construction chain over a
/// ladder of targets and by a local search.
///
/// Each ladder target `k` runs [`nt_construct`] (accepting a partial result
/// on failure), then [`bad_to_separated`] and [`separated_to_distinct`]. The
/// local search toggles single vertices of `S` while that increases the
/// number of distinct degrees in `G[S]`, or keeps it and removes degree
/// collisions. Ties favour the construction chain.
pub fn find_distinct_degrees<R: Rng + ?Sized>(g: &Graph, cfg: &PipelineConfig, rng: &mut R) -> Result<FoundWitness> {
    if g.n() == 0 {
        return Err(Error::InvalidParams("graph has no vertices".into()));
    }
    let base = Seed::draw(rng);
    let ladder = if cfg.k_ladder.is_empty() { default_ladder(g.n()) } else { cfg.k_ladder.clone() };
    let mut quiet = cfg.clone();
    quiet.verify_bad = false;

    let chain = par::map_indexed(ladder.len(), |i| {
        let seed = base.child(0).child(i as u64);
        run_chain(g, ladder[i], &quiet, seed).map(|w| (w, seed))
    });
    let greedy = par::map_indexed(cfg.greedy_restarts.max(1), |r| {
        let seed = base.child(1).child(r as u64);
        (hill_climb(g, seed, r == 0), seed)
    });

    let mut best = FoundWitness {
        witness: DistinctWitness::singleton(g, 0)?,
        method: Method::Greedy,
        seed: base,
    };
    for (w, seed) in chain.into_iter().flatten() {
        if w.k() > best.witness.k() || (w.k() == best.witness.k() && best.method == Method::Greedy) {
            best = FoundWitness {
                witness: w,
                method: Method::NtConstruct,
                seed,
            };
        }
    }
    for (w, seed) in greedy {
        if w.k() > best.witness.k() {
            best = FoundWitness {
                witness: w,
                method: Method::Greedy,
                seed,
            };
        }
    }
    debug_assert!(best.witness.verify(g));
    Ok(best)
}

/// `2, 4, 8, …` up to `n^{2/3}`.
fn default_ladder(n: usize) -> Vec<usize> {
    let top = ((n as f64).powf(2.0 / 3.0).ceil() as usize).max(2);
    std::iter::successors(Some(2usize), |k| Some(k * 2)).take_while(|&k| k <= top).collect()
}

fn run_chain(g: &Graph, k: usize, cfg: &PipelineConfig, seed: Seed) -> Option<DistinctWitness> {
    let built: Construction = match nt_construct(g, k, cfg, seed) {
        Ok(c) => c,
        Err(Error::ConstructionFailed { partial: Some(c), .. }) => *c,
        Err(_) => return None,
    };
    if built.u.len() < 2 {
        return None;
    }
    let mut rng = seed.child(1).rng();
    let sep = bad_to_separated(g, &built.distribution, &built.u, cfg.attempts, &mut rng).ok()?;
    if sep.len() < 2 {
        return None;
    }
    separated_to_distinct(g, &sep, cfg.attempts, &mut rng).ok()
}

/// Induced subgraph under single-vertex toggles, tracking every vertex's
/// degree into `S` and a histogram of the degrees of members.
struct Climb<'a> {
    g: &'a Graph,
    member: Vec<bool>,
    deg: Vec<usize>,
    hist: Vec<u32>,
    distinct: usize,
    /// `Σ c²` over histogram counts; lower means fewer collisions.
    collisions: u64,
}

impl<'a> Climb<'a> {
    fn new(g: &'a Graph, member: Vec<bool>) -> Self {
        let s = VertexSet::from_indices(g.n(), (0..g.n()).filter(|&v| member[v])).expect("in range");
        let deg: Vec<usize> = (0..g.n()).map(|v| g.deg_to(v, &s)).collect();
        let mut climb = Climb {
            g,
            member,
            deg,
            hist: vec![0; g.n().max(1)],
            distinct: 0,
            collisions: 0,
        };
        for v in 0..g.n() {
            if climb.member[v] {
                climb.bump(climb.deg[v]);
            }
        }
        climb
    }

    fn bump(&mut self, d: usize) {
        if self.hist[d] == 0 {
            self.distinct += 1;
        }
        self.collisions += 2 * self.hist[d] as u64 + 1;
        self.hist[d] += 1;
    }

    fn drop_one(&mut self, d: usize) {
        self.hist[d] -= 1;
        self.collisions -= 2 * self.hist[d] as u64 + 1;
        if self.hist[d] == 0 {
            self.distinct -= 1;
        }
    }

    fn toggle(&mut self, v: usize) {
        let g = self.g;
        let adding = !self.member[v];
        if adding {
            self.member[v] = true;
            self.bump(self.deg[v]);
        } else {
            self.drop_one(self.deg[v]);
            self.member[v] = false;
        }
        for u in g.neighbors(v) {
            if self.member[u] {
                self.drop_one(self.deg[u]);
            }
            if adding {
                self.deg[u] += 1;
            } else {
                self.deg[u] -= 1;
            }
            if self.member[u] {
                self.bump(self.deg[u]);
            }
        }
    }

    /// More distinct degrees first, then fewer collisions.
    fn score(&self) -> (usize, std::cmp::Reverse<u64>) {
        (self.distinct, std::cmp::Reverse(self.collisions))
    }

    fn set(&self) -> VertexSet {
        VertexSet::from_indices(self.g.n(), (0..self.g.n()).filter(|&v| self.member[v])).expect("in range")
    }
}

const MAX_PASSES: usize = 200;

/// Local search, ranking states by distinct degrees and then by fewer
/// equal-degree pairs, from `S = V` (when `full_start`) or a random half.
fn hill_climb(g: &Graph, seed: Seed, full_start: bool) -> DistinctWitness {
    let mut rng = seed.rng();
    let start: Vec<bool> = (0..g.n()).map(|_| full_start || rng.gen::<bool>()).collect();
    let mut climb = Climb::new(g, start);
    let mut order: Vec<usize> = (0..g.n()).collect();
    for _ in 0..MAX_PASSES {
        order.shuffle(&mut rng);
        let mut improved = false;
        for &v in &order {
            let before = climb.score();
            climb.toggle(v);
            if climb.score() > before {
                improved = true;
            } else {
                climb.toggle(v);
            }
        }
        if !improved {
            break;
        }
    }
    let s = climb.set();
    if s.is_empty() {
        return DistinctWitness::singleton(g, 0).expect("vertex 0 exists");
    }
    let u = distinct_representatives(g, &s, &s.to_vec());
    DistinctWitness::new(g, s, u).expect("one vertex per degree")
}
