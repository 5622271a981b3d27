use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::convert::turan_independent_set;
use super::{Construction, PipelineConfig, Step};
use crate::distributions::{BadEstimator, Distribution};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, InducedSubgraph, VertexSet};
use crate::rng::Seed;

/// Blend over all vertices for a `(k^{3/2} + k)`-diverse set of `k + 1`
/// vertices, with `β = 1 / √(56 (k + 1) ln(k + 1))`.
pub fn diverse_blended(g: &Graph, u_set: &VertexSet, k: usize) -> Result<Distribution> {
    blend_diverse_in(g, &g.vertices(), u_set, k)
}

fn blend_diverse_in(g: &Graph, support: &VertexSet, u_set: &VertexSet, k: usize) -> Result<Distribution> {
    if k == 0 || u_set.len() != k + 1 {
        return Err(Error::InvalidParams(format!("need k + 1 = {} vertices, got {}", k + 1, u_set.len())));
    }
    let need = (k as f64).powf(1.5) + k as f64;
    if let Some(d) = g.min_diversity(u_set, support) {
        if (d as f64) < need {
            return Err(Error::NotDiverse(format!("minimum diversity {d} below {need:.2}")));
        }
    }
    Distribution::blended(u_set.clone(), support.clone(), blend_width(k))
}

/// `β` used for a diverse set of `k + 1` vertices.
pub(crate) fn blend_width(k: usize) -> f64 {
    let m = (k + 1) as f64;
    (1.0 / (56.0 * m * m.ln()).sqrt()).min(0.4)
}

/// Output of [`bounded_degree_construct`].
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedDegree {
    /// `u₁, …, u_{k+1}` in the order they were picked.
    pub order: Vec<usize>,
    /// Control sets `Y₁, …, Y_k`; `Y_i ⊆ N(u_i)`, `|Y_i| = 2k`.
    pub controls: Vec<VertexSet>,
    pub u: VertexSet,
    pub distribution: Distribution,
}

/// Greedy bounded-degree construction. Round `i` picks `u_i` of degree at
/// least `2k` among surviving vertices, takes `2k` of its neighbours as `Y_i`
/// and discards `Y_i` together with every vertex having `≥ k/2` neighbours in
/// `Y_i`. Every later `u_j` then sees at most `k/2` of `Y_i`, so a uniformly
/// constant factor on each `Y_i` separates the expected degrees.
pub fn bounded_degree_construct(g: &Graph, k: usize) -> Result<BoundedDegree> {
    bounded_degree_in(g, &g.vertices(), k)
}

pub(crate) fn bounded_degree_in(g: &Graph, active: &VertexSet, k: usize) -> Result<BoundedDegree> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let mut alive = active.clone();
    let mut order = Vec::with_capacity(k + 1);
    let mut controls = Vec::with_capacity(k);
    for placed in 0..k {
        let pick = alive
            .iter()
            .map(|v| (g.deg_to(v, &alive), v))
            .filter(|&(d, _)| d >= 2 * k)
            .min();
        let Some((_, u)) = pick else {
            return Err(Error::InsufficientDegree { placed, needed: 2 * k });
        };
        let y = VertexSet::from_indices(g.n(), g.neighbors_in(u, &alive).take(2 * k))?;
        let z: Vec<usize> = alive.iter().filter(|&v| 2 * g.deg_to(v, &y) >= k).collect();
        alive.difference_with(&y);
        for v in z {
            alive.remove(v);
        }
        order.push(u);
        controls.push(y);
    }
    let Some(last) = alive.first() else {
        return Err(Error::InsufficientDegree { placed: k, needed: 2 * k });
    };
    order.push(last);
    let u = VertexSet::from_indices(g.n(), order.iter().copied())?;
    let mut factors: Vec<Distribution> = controls.iter().cloned().map(Distribution::UniformConstant).collect();
    let mut rest = active.clone();
    for y in &controls {
        rest.difference_with(y);
    }
    if !rest.is_empty() {
        factors.push(Distribution::Trivial(rest));
    }
    Ok(BoundedDegree {
        order,
        controls,
        u,
        distribution: Distribution::product(factors)?,
    })
}

/// Deletes vertices until `Δ(H) ≤ 5 log₂n · δ(H)`, keeping at least
/// `n / (30 log₂n)` of them.
///
/// First up to `⌊log₂n⌋ + 1` rounds each strip every vertex of degree at least
/// `d̄ log₂n` (with `d̄` frozen at the start of the round), stopping once
/// `Δ ≤ 2 d̄ log₂n`. Then vertices with `5 d(v) < 2 d̄` are removed one at a
/// time, smallest degree first.
pub fn regularize(g: &Graph) -> Result<InducedSubgraph> {
    g.induced_subgraph(&regularize_in(g, &g.vertices()))
}

pub(crate) fn regularize_in(g: &Graph, active: &VertexSet) -> VertexSet {
    let n = active.len();
    let mut alive = active.clone();
    if n < 2 {
        return alive;
    }
    let log_n = (n as f64).log2();
    let mut deg: Vec<usize> = (0..g.n()).map(|v| if alive.contains(v) { g.deg_to(v, &alive) } else { 0 }).collect();
    let average = |alive: &VertexSet, deg: &[usize]| -> f64 {
        if alive.is_empty() {
            0.0
        } else {
            alive.iter().map(|v| deg[v]).sum::<usize>() as f64 / alive.len() as f64
        }
    };
    let remove = |alive: &mut VertexSet, deg: &mut [usize], v: usize| {
        alive.remove(v);
        for x in g.neighbors_in(v, alive) {
            deg[x] -= 1;
        }
    };

    for _ in 0..=(log_n.floor() as usize) {
        let avg = average(&alive, &deg);
        let max = alive.iter().map(|v| deg[v]).max().unwrap_or(0);
        if max as f64 <= 2.0 * avg * log_n {
            break;
        }
        let cut = avg * log_n;
        while let Some(v) = alive.iter().find(|&v| deg[v] as f64 >= cut) {
            remove(&mut alive, &mut deg, v);
        }
    }

    loop {
        let avg = average(&alive, &deg);
        let low = alive.iter().filter(|&v| 5.0 * (deg[v] as f64) < 2.0 * avg).min_by_key(|&v| (deg[v], v));
        match low {
            Some(v) => remove(&mut alive, &mut deg, v),
            None => break,
        }
    }
    alive
}

/// Graph on `V(G)` joining `u` and `v` when `|N(u) △ N(v)| ≤ ε · min(d(u), d(v))`.
pub fn diversity_graph(g: &Graph, eps: f64) -> Graph {
    diversity_graph_in(g, &g.vertices(), eps)
}

/// [`diversity_graph`] of `G[active]`, on the root vertex indices.
pub(crate) fn diversity_graph_in(g: &Graph, active: &VertexSet, eps: f64) -> Graph {
    let members = active.to_vec();
    let deg: Vec<usize> = (0..g.n()).map(|v| if active.contains(v) { g.deg_to(v, active) } else { 0 }).collect();
    let mut b = GraphBuilder::new(g.n());
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            let bound = eps * deg[u].min(deg[v]) as f64;
            if g.diversity_unchecked(u, v, active) as f64 <= bound {
                b.add_edge(u, v);
            }
        }
    }
    b.build()
}

/// Piece of a construction on an active vertex set: `distribution` covers
/// exactly the active set.
struct Piece {
    u: VertexSet,
    distribution: Distribution,
}

struct Builder<'a> {
    g: &'a Graph,
    complement: &'a Graph,
    cfg: &'a PipelineConfig,
    rng: ChaCha8Rng,
    steps: Vec<Step>,
}

/// Builds a set `U` and a distribution with small `bad(U)`, aiming for
/// `|U| ≈ k + 1`.
///
/// The procedure looks for a `2k^{3/2}`-diverse set of size `k + 1` and
/// blends it. Failing that, the maximal diverse set clusters the vertices.
/// When no large cluster has a mid-range degree, most vertices have
/// extreme degree and the bounded-degree greedy runs on the low side (or on
/// the complement of the high side), lowering `k` until it succeeds.
/// Otherwise a large cluster `V` splits the rest into vertices with many and
/// with few neighbours in `V`; both halves recurse with `k` scaled by their
/// share of the vertices, and a uniformly constant factor on `V` separates
/// the two results.
pub fn nt_construct(g: &Graph, k: usize, cfg: &PipelineConfig, seed: Seed) -> Result<Construction> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if g.n() == 0 {
        return Err(Error::InvalidParams("graph has no vertices".into()));
    }
    let complement = g.complement();
    let mut b = Builder {
        g,
        complement: &complement,
        cfg,
        rng: seed.rng(),
        steps: Vec::new(),
    };
    let all = g.vertices();
    let piece = b.build(&all, k as f64, 0, cfg.dense_branch)?;
    let mut out = Construction {
        u: piece.u,
        distribution: piece.distribution,
        steps: b.steps,
        bad_sum: None,
    };
    if cfg.verify_bad && out.u.len() >= 2 {
        let est = BadEstimator::new(cfg.bad_trials)?;
        let members = out.u.to_vec();
        let batch = est.batch(&out.distribution, g, &members, &all, seed.child(u64::MAX))?;
        let total = batch.sum_within(&(0..members.len()).collect::<Vec<_>>());
        out.bad_sum = Some(total);
        if total > cfg.bad_bound(members.len()) {
            return Err(Error::ConstructionFailed {
                reason: format!(
                    "estimated bad {total:.2} exceeds bound {:.2} for |U| = {}",
                    cfg.bad_bound(members.len()),
                    members.len()
                ),
                partial: Some(Box::new(out)),
            });
        }
    }
    Ok(out)
}

impl<'a> Builder<'a> {
    fn leaf(&mut self, active: &VertexSet) -> Piece {
        let u = VertexSet::from_indices(active.universe(), active.iter().take(2)).expect("subset of active");
        self.steps.push(Step::Leaf { size: u.len() });
        Piece {
            u,
            distribution: Distribution::Trivial(active.clone()),
        }
    }

    fn build(&mut self, active: &VertexSet, k: f64, depth: usize, dense: bool) -> Result<Piece> {
        if depth > self.cfg.max_depth {
            let partial = self.leaf(active);
            return Err(Error::ConstructionFailed {
                reason: format!("recursion depth {depth} exceeds {}", self.cfg.max_depth),
                partial: Some(Box::new(Construction {
                    u: partial.u,
                    distribution: partial.distribution.completed(),
                    steps: self.steps.clone(),
                    bad_sum: None,
                })),
            });
        }
        let kk = k.ceil() as usize;
        if k < 1.0 || active.len() <= kk.max(2) {
            return Ok(self.leaf(active));
        }
        let g = self.g;
        let n_active = active.len();
        let kf = kk as f64;
        let threshold = self.cfg.diverse_factor * kf.powf(1.5);

        let centres = greedy_diverse(g, active, threshold, kk + 1);
        if centres.len() == kk + 1 {
            let u = VertexSet::from_indices(g.n(), centres.iter().copied())?;
            let dist = Distribution::blended(u.clone(), active.clone(), blend_width(kk))?;
            self.steps.push(Step::Diverse { size: u.len() });
            return Ok(Piece { u, distribution: dist });
        }

        let dense = dense && (n_active as f64) < self.cfg.dense_threshold * kf.powf(2.5);
        let (mid, side) = if dense {
            let w = n_active as f64 * kf.powf(-1.0 / 3.0);
            (w, w + 2.0 * kf.powf(1.5))
        } else {
            (self.cfg.mid_window * kf.powf(1.5), self.cfg.side_window * kf.powf(1.5))
        };
        let top = (n_active - 1) as f64;
        let degree = |v: usize| g.deg_to(v, active) as f64;
        let cluster_min = (self.cfg.cluster_factor * kf).ceil() as usize;

        let split = centres.iter().find_map(|&c| {
            let d = degree(c);
            if d < mid || d > top - mid {
                return None;
            }
            let cluster: Vec<usize> = active
                .iter()
                .filter(|&v| (g.diversity_unchecked(v, c, active) as f64) < threshold || v == c)
                .collect();
            (cluster.len() >= cluster_min).then_some((c, cluster))
        });

        match split {
            Some((centre, cluster)) => self.split(active, k, depth, dense, centre, cluster, cluster_min),
            None => self.one_sided(active, kk, dense, side),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn split(
        &mut self,
        active: &VertexSet,
        k: f64,
        depth: usize,
        dense: bool,
        centre: usize,
        mut cluster: Vec<usize>,
        size: usize,
    ) -> Result<Piece> {
        let g = self.g;
        let kf = k.ceil();
        cluster.sort_by_key(|&v| (if v == centre { 0 } else { g.diversity_unchecked(v, centre, active) }, v));
        let v_set = VertexSet::from_indices(g.n(), cluster.into_iter().take(size))?;
        let mut high = VertexSet::new(g.n());
        let mut low = VertexSet::new(g.n());
        for x in active.iter().filter(|&x| !v_set.contains(x)) {
            let d = g.deg_to(x, &v_set) as f64;
            if g.has_edge(x, centre) {
                if d >= self.cfg.split_high * kf {
                    high.insert(x);
                }
            } else if d <= self.cfg.split_low * kf {
                low.insert(x);
            }
        }
        let n_active = active.len() as f64;
        self.steps.push(Step::Split {
            high: high.len(),
            low: low.len(),
        });
        let k_high = k * high.len() as f64 / n_active;
        let k_low = k * low.len() as f64 / n_active;
        let mut parts = Vec::new();
        for (side, k_side) in [(&high, k_high), (&low, k_low)] {
            if side.is_empty() {
                continue;
            }
            parts.push((side.clone(), self.build(side, k_side, depth + 1, dense)?));
        }
        let mut rest = active.clone();
        for (side, _) in &parts {
            rest.difference_with(side);
        }
        let target = k.ceil() as usize + 1;
        if let Some(i) = parts.iter().position(|(_, p)| p.u.len() >= target) {
            let (_, piece) = parts.swap_remove(i);
            let mut factors = vec![piece.distribution];
            let mut others = active.clone();
            others.difference_with(&factors[0].domain());
            if !others.is_empty() {
                factors.push(Distribution::Trivial(others));
            }
            return Ok(Piece {
                u: piece.u,
                distribution: Distribution::product(factors)?,
            });
        }
        let mut u = VertexSet::new(g.n());
        let mut factors = Vec::new();
        for (_, piece) in parts {
            u.union_with(&piece.u);
            factors.push(piece.distribution);
        }
        factors.push(Distribution::UniformConstant(v_set.clone()));
        rest.difference_with(&v_set);
        if !rest.is_empty() {
            factors.push(Distribution::Trivial(rest));
        }
        Ok(Piece {
            u,
            distribution: Distribution::product(factors)?,
        })
    }

    fn one_sided(&mut self, active: &VertexSet, kk: usize, dense: bool, side: f64) -> Result<Piece> {
        let g = self.g;
        let top = (active.len() - 1) as f64;
        let mut low = VertexSet::new(g.n());
        let mut high = VertexSet::new(g.n());
        for v in active {
            let d = g.deg_to(v, active) as f64;
            if d <= side {
                low.insert(v);
            }
            if d >= top - side {
                high.insert(v);
            }
        }
        let sides = if low.len() >= high.len() {
            [(low, false), (high, true)]
        } else {
            [(high, true), (low, false)]
        };

        if dense {
            for (set, complement) in &sides {
                if set.len() < 2 {
                    continue;
                }
                if let Ok(piece) = self.dense_case(active, set, kk, *complement) {
                    return Ok(piece);
                }
            }
        }

        for k_try in (1..=kk).rev() {
            for (set, complement) in &sides {
                if set.len() < 2 {
                    continue;
                }
                let graph = if *complement { self.complement } else { self.g };
                if let Ok(found) = bounded_degree_in(graph, set, k_try) {
                    self.steps.push(Step::BoundedDegree {
                        k: k_try,
                        complement: *complement,
                    });
                    return Ok(self.pad(active, found.u, found.distribution));
                }
            }
        }
        Ok(self.leaf(active))
    }

    /// Extends a distribution on part of `active` by a trivial factor.
    fn pad(&self, active: &VertexSet, u: VertexSet, dist: Distribution) -> Piece {
        let mut rest = active.clone();
        rest.difference_with(&dist.domain());
        let distribution = if rest.is_empty() {
            dist
        } else {
            match dist {
                Distribution::Product(mut children) => {
                    children.push(Distribution::Trivial(rest));
                    Distribution::Product(children)
                }
                other => Distribution::Product(vec![other, Distribution::Trivial(rest)]),
            }
        };
        Piece { u, distribution }
    }

    /// Dense-regime construction on `G[side]` (or its complement): regularize,
    /// then split by degree in the diversity graph.
    fn dense_case(&mut self, active: &VertexSet, side: &VertexSet, k: usize, complement: bool) -> Result<Piece> {
        let graph = if complement { self.complement } else { self.g };
        let h = regularize_in(graph, side);
        let m = h.len();
        if m < 4 {
            return Err(Error::ConstructionFailed {
                reason: "regularized subgraph too small".into(),
                partial: None,
            });
        }
        let j = diversity_graph_in(graph, &h, self.cfg.diversity_eps);
        let kf = k as f64;
        let sparse_cut = m as f64 / (self.cfg.s1_divisor * kf);
        let s1 = VertexSet::from_indices(graph.n(), h.iter().filter(|&v| j.deg_to(v, &h) as f64 <= sparse_cut))?;
        let piece = if 2 * s1.len() >= m {
            self.dense_sparse_j(graph, &h, &j, &s1, k)?
        } else {
            let s2 = h.difference(&s1);
            self.dense_clustered(graph, &h, &j, &s2, k, complement)?
        };
        Ok(self.pad(active, piece.u, piece.distribution))
    }

    /// Few diversity-graph edges: a random sample of the sparse vertices has
    /// a large independent set in `J`, which is diverse enough to blend.
    fn dense_sparse_j(&mut self, graph: &'a Graph, h: &VertexSet, j: &Graph, s1: &VertexSet, k: usize) -> Result<Piece> {
        let n = graph.n().max(2) as f64;
        let log_n = n.log2();
        let members = s1.to_vec();
        let keep = (8.0 * k as f64 / members.len() as f64).min(1.0);
        let delta = h.iter().map(|v| graph.deg_to(v, h)).max().unwrap_or(0) as f64;
        let m_delta = (240.0 * delta * k as f64 / n).max(1.0);
        let mut best: Option<VertexSet> = None;
        for _ in 0..self.cfg.w_retries.max(1) {
            let w = VertexSet::from_indices(graph.n(), members.iter().copied().filter(|_| self.rng.gen::<f64>() < keep))?;
            let size_ok = w.len() >= 4 * k;
            let edges_ok = w.iter().map(|v| j.deg_to(v, &w)).sum::<usize>() / 2 <= k;
            let balance_ok = h.iter().all(|v| graph.deg_to(v, &w) as f64 <= 2.0 * log_n * m_delta);
            if size_ok && edges_ok && balance_ok {
                best = Some(w);
                break;
            }
            if best.as_ref().is_none_or(|b| w.len() > b.len()) && balance_ok {
                best = Some(w);
            }
        }
        let w = best.ok_or_else(|| Error::ConstructionFailed {
            reason: "no balanced sample of sparse vertices".into(),
            partial: None,
        })?;
        let sub = j.induced_subgraph(&w)?;
        let independent = turan_independent_set(&sub.graph);
        let u = VertexSet::from_indices(graph.n(), independent.iter().map(|i| sub.vertices[i]).take(k + 1))?;
        if u.len() < 2 {
            return Err(Error::ConstructionFailed {
                reason: "independent set in the diversity graph too small".into(),
                partial: None,
            });
        }
        let beta = (1.0 / (10.0 * log_n * m_delta.sqrt())).min(0.4);
        let dist = Distribution::blended(u.clone(), h.clone(), beta)?;
        self.steps.push(Step::Dense { case: 1, size: u.len() });
        Ok(self.pad(h, u, dist))
    }

    /// Many diversity-graph edges: pick well separated hubs `w`, recurse on
    /// private parts of their neighbourhoods and separate different hubs by
    /// uniformly constant factors on control sets `T_w` of `J`-neighbours.
    fn dense_clustered(
        &mut self,
        graph: &'a Graph,
        h: &VertexSet,
        j: &Graph,
        s2: &VertexSet,
        k: usize,
        complement: bool,
    ) -> Result<Piece> {
        let n = graph.n();
        let delta = h.iter().map(|v| graph.deg_to(v, h)).max().unwrap_or(0).max(1) as f64;
        let t = self.cfg.control_size.unwrap_or_else(|| {
            let kf = k as f64;
            (9.0 * kf / (2f64.powi(19) * kf.log2().max(1.0).powi(2))).floor() as usize
        });
        let t = t.max(self.cfg.min_control_size);
        let keep = (1.0 / (8.0 * delta)).min(1.0);
        let hubs_pool = s2.to_vec();

        let mut best: Option<(Vec<usize>, Vec<VertexSet>, Vec<VertexSet>)> = None;
        for _ in 0..self.cfg.w_retries.max(1) {
            let w0 = VertexSet::from_indices(n, hubs_pool.iter().copied().filter(|_| self.rng.gen::<f64>() < keep))?;
            let mut hubs = Vec::new();
            let mut privates = Vec::new();
            let mut controls = Vec::new();
            let mut used_controls = VertexSet::new(n);
            for w in &w0 {
                let nbrs = graph.neighborhood(w).intersection(h);
                let private = VertexSet::from_indices(
                    n,
                    nbrs.iter().filter(|&v| graph.deg_to(v, &w0) == 1),
                )?;
                if 2 * private.len() < nbrs.len() || private.is_empty() {
                    continue;
                }
                let control = VertexSet::from_indices(n, j.neighbors_in(w, h).filter(|&v| !used_controls.contains(v)).take(t))?;
                if control.len() < t {
                    continue;
                }
                used_controls.union_with(&control);
                hubs.push(w);
                privates.push(private);
                controls.push(control);
            }
            if best.as_ref().is_none_or(|b| hubs.len() > b.0.len()) {
                best = Some((hubs, privates, controls));
            }
            if best.as_ref().is_some_and(|b| b.0.len() >= 2) {
                break;
            }
        }
        let (hubs, privates, controls) = best.unwrap_or_default();
        if hubs.len() < 2 {
            return Err(Error::ConstructionFailed {
                reason: format!("only {} hubs with private neighbourhoods", hubs.len()),
                partial: None,
            });
        }

        let tf = t as f64;
        let mut removed = VertexSet::new(n);
        for (i, control) in controls.iter().enumerate() {
            removed.union_with(control);
            removed.insert(hubs[i]);
            for (l, private) in privates.iter().enumerate() {
                for v in private {
                    let d = graph.deg_to(v, control) as f64;
                    if (l == i && d <= 2.0 * tf / 3.0) || (l != i && d >= tf / 3.0) {
                        removed.insert(v);
                    }
                }
            }
        }
        let total = h.len() as f64;
        let mut pieces = Vec::new();
        let mut u_domains = VertexSet::new(n);
        for (i, private) in privates.iter().enumerate() {
            let cleaned = private.difference(&removed);
            if cleaned.len() < 2 {
                continue;
            }
            let k_w = cleaned.len() as f64 * k as f64 / total;
            let saved = std::mem::take(&mut self.steps);
            let inner = Builder {
                g: graph,
                complement: if complement { self.g } else { self.complement },
                cfg: self.cfg,
                rng: Seed::draw(&mut self.rng).rng(),
                steps: Vec::new(),
            }
            .build_boxed(&cleaned, k_w);
            self.steps = saved;
            let piece = match inner {
                Ok(p) => p,
                Err(_) => self.leaf(&cleaned),
            };
            u_domains.union_with(&cleaned);
            pieces.push((i, piece));
        }
        if pieces.is_empty() {
            return Err(Error::ConstructionFailed {
                reason: "no hub kept a usable private set".into(),
                partial: None,
            });
        }
        pieces.sort_by_key(|(i, p)| (std::cmp::Reverse(p.u.len()), *i));
        let need = (tf / 9.0).max(2.0);
        let mut chosen = Vec::new();
        let mut size = 0;
        for entry in pieces {
            size += entry.1.u.len();
            chosen.push(entry);
            if size as f64 >= need {
                break;
            }
        }
        let mut u = VertexSet::new(n);
        let mut factors = Vec::new();
        let mut covered = VertexSet::new(n);
        for (i, piece) in chosen.iter().map(|(i, p)| (*i, p)) {
            u.union_with(&piece.u);
            covered.union_with(&piece.distribution.domain());
            factors.push(piece.distribution.clone());
            if !covered.is_disjoint(&controls[i]) {
                continue;
            }
        }
        for control in &controls {
            if covered.is_disjoint(control) {
                covered.union_with(control);
                factors.push(Distribution::UniformConstant(control.clone()));
            }
        }
        let rest = h.difference(&covered);
        if !rest.is_empty() {
            factors.push(Distribution::Trivial(rest));
        }
        self.steps.push(Step::Dense { case: 2, size: u.len() });
        Ok(Piece {
            u,
            distribution: Distribution::product(factors)?,
        })
    }
}

impl Builder<'_> {
    fn build_boxed(mut self, active: &VertexSet, k: f64) -> Result<Piece> {
        self.build(active, k, 0, false)
    }
}

/// Farthest-point selection: start from the lowest vertex, repeatedly add the
/// vertex whose minimum diversity to the chosen set is largest (lowest index
/// on ties) while that minimum is at least `threshold`, up to `limit`.
pub(crate) fn greedy_diverse(g: &Graph, active: &VertexSet, threshold: f64, limit: usize) -> Vec<usize> {
    let Some(first) = active.first() else {
        return Vec::new();
    };
    let members = active.to_vec();
    let mut nearest: Vec<usize> = members.iter().map(|&v| g.diversity_unchecked(v, first, active)).collect();
    let mut chosen = vec![first];
    while chosen.len() < limit {
        let Some((i, &far)) = members
            .iter()
            .enumerate()
            .map(|(i, _)| (i, &nearest[i]))
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        else {
            break;
        };
        if (far as f64) < threshold || far == 0 {
            break;
        }
        let v = members[i];
        chosen.push(v);
        for (x, &w) in members.iter().enumerate() {
            nearest[x] = nearest[x].min(g.diversity_unchecked(w, v, active));
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gnp, turan};

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_indices(n, v.iter().copied()).unwrap()
    }

    #[test]
    fn blend_width_formula() {
        let expected = 1.0 / (168.0 * 3f64.ln()).sqrt();
        assert!((blend_width(2) - expected).abs() < 1e-12);
    }

    #[test]
    fn diverse_blended_rejects_twins() {
        let g = Graph::from_edges(4, [(0, 2), (1, 2), (0, 3), (1, 3)]).unwrap();
        assert!(matches!(diverse_blended(&g, &set(4, &[0, 1]), 1), Err(Error::NotDiverse(_))));
    }

    #[test]
    fn diverse_blended_on_random_triple() {
        let g = gnp(100, 0.5, Seed(1)).unwrap();
        let triple = greedy_diverse(&g, &g.vertices(), 2.0 * 2f64.powf(1.5), 3);
        assert_eq!(triple.len(), 3);
        let d = diverse_blended(&g, &set(100, &triple), 2).unwrap();
        match d {
            Distribution::Blended { beta, .. } => assert!((beta - blend_width(2)).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bounded_degree_structure() {
        let g = gnp(200, 0.2, Seed(7)).unwrap();
        let k = 3;
        let r = bounded_degree_construct(&g, k).unwrap();
        assert_eq!(r.u.len(), k + 1);
        for (i, y) in r.controls.iter().enumerate() {
            assert_eq!(y.len(), 2 * k);
            assert!(y.is_disjoint(&r.u));
            assert_eq!(g.deg_to(r.order[i], y), 2 * k);
            for &later in &r.order[i + 1..] {
                assert!(2 * g.deg_to(later, y) < k);
            }
            for other in &r.controls[i + 1..] {
                assert!(y.is_disjoint(other));
            }
        }
    }

    #[test]
    fn bounded_degree_on_empty_graph() {
        assert!(matches!(
            bounded_degree_construct(&Graph::empty(10), 1),
            Err(Error::InsufficientDegree { placed: 0, .. })
        ));
    }

    #[test]
    fn regularize_examples() {
        let c = Graph::from_edges(10, (0..10).map(|i| (i, (i + 1) % 10))).unwrap();
        assert_eq!(regularize(&c).unwrap().graph, c);

        let star = Graph::from_edges(100, (1..100).map(|i| (0, i))).unwrap();
        let h = regularize(&star).unwrap();
        let st = h.graph.degree_stats();
        assert!(h.vertices.len() as f64 >= 100.0 / (30.0 * 100f64.log2()));
        assert!(st.max as f64 <= 5.0 * 100f64.log2() * st.min as f64);
    }

    #[test]
    fn diversity_graph_examples() {
        let e = diversity_graph(&Graph::empty(5), 0.5);
        assert_eq!(e, Graph::complete(5));
        let matching = Graph::from_edges(8, (0..4).map(|i| (2 * i, 2 * i + 1))).unwrap();
        assert_eq!(diversity_graph(&matching, 1.0 / 48.0), Graph::empty(8));
        assert_eq!(diversity_graph(&Graph::complete(100), 1.0 / 48.0), Graph::complete(100));
    }

    #[test]
    fn nt_construct_on_turan() {
        let g = turan(400, 20).unwrap();
        let c = nt_construct(&g, 20, &PipelineConfig::default(), Seed(1)).unwrap();
        assert!(c.u.len() >= 10, "{:?}", c.steps);
        assert!(c.bad_sum.unwrap() <= PipelineConfig::default().bad_bound(c.u.len()));
        assert_eq!(c.distribution.domain(), g.vertices());
    }

    #[test]
    fn nt_construct_on_complete_graph() {
        let g = Graph::complete(12);
        match nt_construct(&g, 4, &PipelineConfig::default(), Seed(0)) {
            Ok(c) => assert!((1..=2).contains(&c.u.len())),
            Err(Error::ConstructionFailed { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
