//! Distinct degrees in `G(n, p)`: the lower-bound chain through convenient
//! sets, the sparse regime, and seeded parameter sweeps.

mod sweep;

pub use sweep::{
    fit_slope, p_grid, run_cell, scaling_sweep, write_csv, CellMethod, CSV_HEADER, ExperimentRecord, PGrid, Regime, SlopeFit, SweepConfig,
    SweepResult,
};

use rand::Rng;

use crate::distributions::expected_degree_dense;
use crate::error::{Error, Result};
use crate::exact::exact_hom;
use crate::graph::{Graph, VertexSet};
use crate::pipeline::{turan_independent_set, DistinctWitness, SeparatedWitness};
use crate::rng::Seed;

/// Numeric thresholds of the `G(n, p)` constructions, kept in one place.
pub mod constants {
    /// Convenient sets only use vertices of degree `≤ DEGREE_CAP · pn`.
    pub const DEGREE_CAP: f64 = 2.0;
    /// Required diversity of `U` to `W`, as a fraction of `pn`.
    pub const DIVERSITY_FRACTION: f64 = 1.0 / 3.0;
    /// Vertices with `≥ BALANCE · p|U|` neighbours in `U` are excluded from `W`.
    pub const BALANCE: f64 = 10.0;
    /// Blend width `β = |U| / (BETA_DIVISOR · pn)`.
    pub const BETA_DIVISOR: f64 = 5.0;
    /// A vertex is good when at most `d^W(u) / GOOD_DIVISOR` of its
    /// neighbours in `W` have leave-one-out coordinate outside `GOOD_RANGE`.
    pub const GOOD_DIVISOR: f64 = 25.0;
    pub const GOOD_RANGE: (f64, f64) = (0.2, 0.8);
    /// A separation sample is accepted when `e(J) ≤ COLLISION_EDGES · |U|`.
    pub const COLLISION_EDGES: f64 = 120.0;
    /// Realized degrees must lie within `√(REALIZE_SPREAD · pn)` of their mean.
    pub const REALIZE_SPREAD: f64 = 2.0;
    /// Pairs closer than `PAIR_WINDOW · √(REALIZE_SPREAD · pn)` in
    /// expectation may collide.
    pub const PAIR_WINDOW: f64 = 2.0;
    /// Default convenient-set size is `∛(pn²) / TARGET_DIVISOR`.
    pub const TARGET_DIVISOR: f64 = 4.0;
    /// `f(G(n, p)) ≤ CEILING · ∛(pn²)` with high probability.
    pub const CEILING: f64 = 128.0;
    /// `hom(G(n, p)) ≤ HOM_FACTOR · ln(n) / p` with high probability.
    pub const HOM_FACTOR: f64 = 4.0;
    /// Retries for the randomized steps.
    pub const ATTEMPTS: usize = 16;
}

use constants::*;

/// `U` with a set `W` it is `pn/3`-diverse to, where every vertex of `W`
/// has at most `10 p |U|` neighbours in `U` and every vertex of `U` has
/// degree at most `2pn`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvenientWitness {
    u: VertexSet,
    w: VertexSet,
    p: f64,
}

impl ConvenientWitness {
    /// Verifies every defining condition against `g`.
    pub fn new(g: &Graph, u: VertexSet, w: VertexSet, p: f64) -> Result<Self> {
        let why = check_convenient(g, &u, &w, p);
        match why {
            None => Ok(ConvenientWitness { u, w, p }),
            Some(reason) => Err(Error::NotConvenient(reason)),
        }
    }

    pub fn u(&self) -> &VertexSet {
        &self.u
    }

    pub fn w(&self) -> &VertexSet {
        &self.w
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn verify(&self, g: &Graph) -> bool {
        check_convenient(g, &self.u, &self.w, self.p).is_none()
    }
}

fn check_convenient(g: &Graph, u: &VertexSet, w: &VertexSet, p: f64) -> Option<String> {
    let pn = p * g.n() as f64;
    if u.universe() != g.n() || w.universe() != g.n() {
        return Some("sets do not match the graph".into());
    }
    if !u.is_disjoint(w) {
        return Some("U and W intersect".into());
    }
    if let Some(v) = u.iter().find(|&v| g.degree(v) as f64 > DEGREE_CAP * pn) {
        return Some(format!("vertex {v} has degree {} above 2pn", g.degree(v)));
    }
    let cap = BALANCE * p * u.len() as f64;
    if let Some(v) = w.iter().find(|&v| g.deg_to(v, u) as f64 > cap) {
        return Some(format!("vertex {v} of W has {} neighbours in U", g.deg_to(v, u)));
    }
    if !g.is_diverse(u, w, DIVERSITY_FRACTION * pn) {
        return Some(format!(
            "U is not {:.1}-diverse to W (minimum {})",
            DIVERSITY_FRACTION * pn,
            g.min_diversity(u, w).unwrap_or(0)
        ));
    }
    None
}

/// `max(⌊∛(pn²) / 4⌋, ⌈√n / 4⌉)`, the default convenient-set size.
pub fn convenient_target(n: usize, p: f64) -> usize {
    let n_f = n as f64;
    let cube = (p * n_f * n_f).cbrt() / TARGET_DIVISOR;
    (cube.floor() as usize).max((n_f.sqrt() / 4.0).ceil() as usize)
}

/// Takes the first `target_size` vertices of degree at most `2pn` as `U` and
/// drops from the rest every vertex with at least `10 p |U|` neighbours in
/// `U`; what remains is `W`. The result is verified, so failure of the
/// underlying high-probability events surfaces as [`Error::NotConvenient`].
pub fn p_convenient_set(g: &Graph, p: f64, target_size: usize) -> Result<ConvenientWitness> {
    let n = g.n() as f64;
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::InvalidParams(format!("p = {p} outside (0, 1/2]")));
    }
    let four_t = 4.0 * target_size as f64;
    if four_t < n.sqrt() || four_t > p * n {
        return Err(Error::InvalidParams(format!(
            "need √n ≤ 4·{target_size} ≤ pn = {:.1}",
            p * n
        )));
    }
    let cap = DEGREE_CAP * p * n;
    let chosen: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) as f64 <= cap).take(target_size).collect();
    if chosen.len() < target_size {
        return Err(Error::NotConvenient(format!(
            "only {} vertices of degree at most 2pn",
            chosen.len()
        )));
    }
    let u = VertexSet::from_indices(g.n(), chosen)?;
    let heavy = BALANCE * p * target_size as f64;
    let w = VertexSet::from_indices(g.n(), (0..g.n()).filter(|&v| !u.contains(v) && (g.deg_to(v, &u) as f64) < heavy))?;
    ConvenientWitness::new(g, u, w, p)
}

/// [`gnp_separate_with`] with the default number of attempts.
pub fn gnp_separate<R: Rng + ?Sized>(g: &Graph, w: &ConvenientWitness, rng: &mut R) -> Result<SeparatedWitness> {
    gnp_separate_with(g, w, ATTEMPTS, rng)
}

/// Blends over `W` with `β = |U| / 5pn`, keeps the good vertices (few
/// neighbours whose coordinate, ignoring the vertex's own shift, leaves
/// `[0.2, 0.8]`), joins good pairs whose expected degrees are within 1 and
/// returns an independent set of that graph. `U` is always kept (`p = 1`)
/// and vertices outside `U ∪ W` get `½`.
///
/// A sample is accepted once at least half of `U` is good and the pair graph
/// has at most `120 |U|` edges; the first accepted sample is used.
pub fn gnp_separate_with<R: Rng + ?Sized>(
    g: &Graph,
    w: &ConvenientWitness,
    attempts: usize,
    rng: &mut R,
) -> Result<SeparatedWitness> {
    let n = g.n();
    let members = w.u.to_vec();
    let size = members.len();
    let pn = w.p * n as f64;
    let beta = size as f64 / (BETA_DIVISOR * pn);
    let (lo, hi) = GOOD_RANGE;
    let everything = g.vertices();

    for _ in 0..attempts.max(1) {
        let alphas: Vec<f64> = (0..size).map(|_| beta * (2.0 * rng.gen::<f64>() - 1.0)).collect();
        let mut raw = vec![0.5; n];
        for (i, &u) in members.iter().enumerate() {
            for v in g.neighbors_in(u, &w.w) {
                raw[v] += alphas[i];
            }
        }
        let mut values: Vec<f64> = raw.iter().map(|x| x.clamp(0.1, 0.9)).collect();
        for &u in &members {
            values[u] = 1.0;
        }

        let good: Vec<usize> = (0..size)
            .filter(|&i| {
                let u = members[i];
                let own = alphas[i];
                let mut degree = 0usize;
                let mut outliers = 0usize;
                for v in g.neighbors_in(u, &w.w) {
                    degree += 1;
                    let q = raw[v] - own;
                    if !(lo..=hi).contains(&q) {
                        outliers += 1;
                    }
                }
                outliers as f64 <= degree as f64 / GOOD_DIVISOR
            })
            .collect();
        if 2 * good.len() < size {
            continue;
        }
        let expected: Vec<f64> = good.iter().map(|&i| expected_degree_dense(g, &values, members[i], &everything)).collect();
        let collisions = close_pairs(&expected, 1.0);
        if collisions.edge_count() as f64 > COLLISION_EDGES * size as f64 {
            continue;
        }
        let keep = turan_independent_set(&collisions);
        if keep.len() < 2 {
            return Err(Error::SeparationFailed(format!(
                "only {} separated vertex among {} good",
                keep.len(),
                good.len()
            )));
        }
        let chosen = VertexSet::from_indices(n, keep.iter().map(|i| members[good[i]]))?;
        let p = crate::distributions::ProbVector::new(everything.clone(), values)?;
        return SeparatedWitness::new(g, p, chosen, 1.0);
    }
    Err(Error::SeparationFailed(format!("no acceptable sample in {attempts} attempts")))
}

/// Graph on indices joining pairs whose values differ by at most `window`.
fn close_pairs(values: &[f64], window: f64) -> Graph {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut b = crate::graph::GraphBuilder::new(values.len());
    for (i, &a) in order.iter().enumerate() {
        for &c in &order[i + 1..] {
            if values[c] - values[a] > window {
                break;
            }
            b.add_edge(a, c);
        }
    }
    b.build()
}

/// [`gnp_realize_with`] with the default number of attempts.
pub fn gnp_realize<R: Rng + ?Sized>(g: &Graph, w: &SeparatedWitness, rng: &mut R) -> Result<DistinctWitness> {
    gnp_realize_with(g, w, ATTEMPTS, rng)
}

/// Samples `H ~ G(p)` and keeps the vertices of `U'` whose realized degree
/// is within `√(2pn)` of its expectation (`B`). Among those, vertices with
/// equal realized degree and expectations within `2√(2pn)` are joined and an
/// independent set is returned. `pn` is read off the average degree of `g`.
/// Samples where fewer than half of `U'` land in `B` are rejected; the
/// largest result over the accepted samples is returned.
pub fn gnp_realize_with<R: Rng + ?Sized>(
    g: &Graph,
    w: &SeparatedWitness,
    attempts: usize,
    rng: &mut R,
) -> Result<DistinctWitness> {
    let members = w.u().to_vec();
    if members.len() == 1 {
        return DistinctWitness::singleton(g, members[0]);
    }
    if members.is_empty() {
        return Err(Error::InvalidWitness("empty separated set".into()));
    }
    let pn = g.degree_stats().average.max(1.0);
    let spread = (REALIZE_SPREAD * pn).sqrt();
    let domain = w.p().domain();
    let expected: Vec<f64> = members.iter().map(|&u| expected_degree_dense(g, w.p().values(), u, domain)).collect();
    let base = Seed::draw(rng);
    let mut best: Option<(VertexSet, VertexSet)> = None;
    for a in 0..attempts.max(1) {
        let h = crate::pipeline::sample_retained(w.p(), base.child(a as u64));
        let mut h = h;
        for &u in &members {
            h.insert(u);
        }
        let realized: Vec<usize> = members.iter().map(|&u| g.deg_to(u, &h)).collect();
        let in_b: Vec<usize> = (0..members.len())
            .filter(|&i| (realized[i] as f64 - expected[i]).abs() <= spread)
            .collect();
        if 2 * in_b.len() < members.len() {
            continue;
        }
        let mut j = crate::graph::GraphBuilder::new(in_b.len());
        for (x, &i) in in_b.iter().enumerate() {
            for (y, &k) in in_b.iter().enumerate().skip(x + 1) {
                if realized[i] == realized[k] && (expected[i] - expected[k]).abs() <= PAIR_WINDOW * spread {
                    j.add_edge(x, y);
                }
            }
        }
        let keep = turan_independent_set(&j.build());
        let u = VertexSet::from_indices(g.n(), keep.iter().map(|x| members[in_b[x]]))?;
        if best.as_ref().is_none_or(|b| u.len() > b.1.len()) {
            best = Some((h, u));
        }
    }
    match best {
        Some((s, u)) if !u.is_empty() => DistinctWitness::new(g, s, u),
        _ => Err(Error::RealizationFailed(format!("no acceptable sample in {attempts} attempts"))),
    }
}

/// `N(u) ∖ (U ∪ ⋃_{u' ≠ u} N(u'))` for every `u ∈ U`, in `U`'s order.
fn private_neighbourhoods(g: &Graph, u_set: &VertexSet) -> Vec<VertexSet> {
    let members = u_set.to_vec();
    let mut once = VertexSet::new(g.n());
    let mut twice = VertexSet::new(g.n());
    for &u in &members {
        let nb = g.neighborhood(u);
        twice.union_with(&once.intersection(&nb));
        once.union_with(&nb);
    }
    let blocked = twice.union(u_set);
    members.iter().map(|&u| g.neighborhood(u).difference(&blocked)).collect()
}

/// Distinct degrees from private neighbourhoods: when each `u ∈ U` has at
/// least `|U|` neighbours seen by no other vertex of `U` (and outside `U`),
/// order `U` by degree inside `U` and give the `i`-th vertex `i` private
/// neighbours. Degrees in the induced subgraph are then strictly increasing.
pub fn sparse_distinct(g: &Graph, u_set: &VertexSet) -> Result<DistinctWitness> {
    if u_set.is_empty() {
        return Err(Error::InvalidSet("empty U".into()));
    }
    let members = u_set.to_vec();
    let private = private_neighbourhoods(g, u_set);
    let k = members.len();
    if let Some(i) = (0..k).find(|&i| private[i].len() < k) {
        return Err(Error::NotPrivate(format!(
            "vertex {} has {} private neighbours, needs {k}",
            members[i],
            private[i].len()
        )));
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| (g.deg_to(members[i], u_set), members[i]));
    let mut s = u_set.clone();
    for (rank, &i) in order.iter().enumerate() {
        for v in private[i].iter().take(rank + 1) {
            s.insert(v);
        }
    }
    DistinctWitness::new(g, s, u_set.clone())
}

/// Greedy `U` for [`sparse_distinct`]: scan vertices by degree (highest
/// first, lowest index on ties) and keep a vertex when every member of the
/// enlarged set still has at least `|U|` private neighbours.
pub fn sparse_select(g: &Graph) -> VertexSet {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut chosen = VertexSet::new(g.n());
    for v in order {
        if g.degree(v) <= chosen.len() {
            break;
        }
        chosen.insert(v);
        let need = chosen.len();
        if private_neighbourhoods(g, &chosen).iter().any(|p| p.len() < need) {
            chosen.remove(v);
        }
    }
    chosen
}

/// `max(1, ⌊128 ∛(pn²)⌋)`: the whp ceiling on `f(G(n, p))`, used to flag
/// sweep cells.
pub fn upper_bound_ceiling(n: usize, p: f64) -> usize {
    let n = n as f64;
    ((CEILING * (p * n * n).cbrt()).floor() as usize).max(1)
}

/// Ceiling on `f(g)` for a graph drawn from `G(n, p)`; `p = 0` gives the
/// exact value 1 on the empty graph.
pub fn upper_bound_probe(g: &Graph, p: f64) -> usize {
    if p <= 0.0 {
        return 1;
    }
    upper_bound_ceiling(g.n(), p)
}

/// `4 ln(n) / p`.
pub fn hom_bound(n: usize, p: f64) -> f64 {
    HOM_FACTOR * (n as f64).ln() / p
}

/// Fraction of the seeds for which `hom(G(n, p)) ≤ 4 ln(n) / p`, by exact
/// computation.
pub fn hom_gnp_pass_rate(n: usize, p: f64, seeds: &[Seed]) -> Result<f64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::InvalidParams(format!("p = {p} outside (0, 1/2]")));
    }
    if seeds.is_empty() {
        return Err(Error::InvalidParams("no seeds".into()));
    }
    let bound = hom_bound(n, p);
    let checks = crate::par::map_indexed(seeds.len(), |i| -> Result<bool> {
        let g = crate::generators::gnp(n, p, seeds[i])?;
        Ok(exact_hom(&g)?.hom as f64 <= bound)
    });
    let mut passed = 0;
    for c in checks {
        passed += usize::from(c?);
    }
    Ok(passed as f64 / seeds.len() as f64)
}

/// Whether the bound holds on at least 95% of the seeds.
pub fn hom_gnp_check(n: usize, p: f64, seeds: &[Seed]) -> Result<bool> {
    Ok(hom_gnp_pass_rate(n, p, seeds)? >= 0.95)
}
