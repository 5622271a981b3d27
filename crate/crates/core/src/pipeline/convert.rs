use rand::Rng;

use super::{DistinctWitness, SeparatedWitness};
use crate::distributions::{expected_degree_dense, Distribution, ProbVector};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::par;
use crate::rng::{unit_f64, Seed};

/// Greedy independent set: repeatedly take a vertex of minimum remaining
/// degree (lowest index on ties) and delete it with its neighbours. The
/// result has at least `n / (d̄ + 1)` vertices.
pub fn turan_independent_set(h: &Graph) -> VertexSet {
    let n = h.n();
    let mut alive = VertexSet::full(n);
    let mut deg = h.degrees();
    let mut chosen = VertexSet::new(n);
    while let Some(v) = alive.iter().min_by_key(|&v| (deg[v], v)) {
        chosen.insert(v);
        let mut gone = vec![v];
        gone.extend(h.neighbors_in(v, &alive));
        for &x in &gone {
            alive.remove(x);
        }
        for &x in &gone {
            for y in h.neighbors_in(x, &alive) {
                deg[y] -= 1;
            }
        }
    }
    chosen
}

/// Graph on `0..len` joining `i` and `j` when `close(i, j)`.
fn pair_graph(len: usize, close: impl Fn(usize, usize) -> bool) -> Graph {
    let mut b = GraphBuilder::new(len);
    for i in 0..len {
        for j in i + 1..len {
            if close(i, j) {
                b.add_edge(i, j);
            }
        }
    }
    b.build()
}

/// From `bad` control to a 1-separated set: sample `p ~ 𝒟`, join pairs of
/// `U` whose expected degrees are within 1, and keep an independent set.
/// The best of `attempts` samples is returned.
pub fn bad_to_separated<R: Rng + ?Sized>(
    g: &Graph,
    dist: &Distribution,
    u_set: &VertexSet,
    attempts: usize,
    rng: &mut R,
) -> Result<SeparatedWitness> {
    if u_set.len() < 2 {
        return Err(Error::InvalidWitness("need at least two vertices to separate".into()));
    }
    if dist.universe() != g.n() {
        return Err(Error::InvalidDomain("distribution and graph disagree on n".into()));
    }
    let dist = dist.clone().completed();
    let domain = dist.domain();
    let members = u_set.to_vec();
    let seed = Seed::draw(rng);
    let tries = par::map_indexed(attempts.max(1), |a| {
        let mut values = vec![0.0; g.n()];
        dist.sample_into(g, &mut seed.child(a as u64).rng(), &mut values);
        let degs: Vec<f64> = members.iter().map(|&u| expected_degree_dense(g, &values, u, &domain)).collect();
        let j = pair_graph(members.len(), |i, k| (degs[i] - degs[k]).abs() <= 1.0);
        let keep = turan_independent_set(&j);
        (keep.len(), values, keep)
    });
    let (_, values, keep) = tries
        .into_iter()
        .fold(None, |best: Option<(usize, Vec<f64>, VertexSet)>, t| match &best {
            Some(b) if b.0 >= t.0 => best,
            _ => Some(t),
        })
        .expect("at least one attempt");
    let chosen = VertexSet::from_indices(g.n(), keep.iter().map(|i| members[i]))?;
    let p = ProbVector::new(domain, values)?;
    SeparatedWitness::new(g, p, chosen, 1.0)
}

/// Draws `S ~ G(p)`: each vertex of the domain is kept independently with
/// its probability.
pub(crate) fn sample_retained(p: &ProbVector, seed: Seed) -> VertexSet {
    let mut s = VertexSet::new(p.domain().universe());
    for v in p.domain() {
        if unit_f64(crate::rng::derive(seed.0, v as u64)) < p.values()[v] {
            s.insert(v);
        }
    }
    s
}

/// One representative per degree value among `candidates` in `G[S]`, via the
/// collision graph (equal degree) and the greedy independent set.
pub(crate) fn distinct_representatives(g: &Graph, s: &VertexSet, candidates: &[usize]) -> VertexSet {
    let present: Vec<usize> = candidates.iter().copied().filter(|&v| s.contains(v)).collect();
    let degs: Vec<usize> = present.iter().map(|&v| g.deg_to(v, s)).collect();
    let h = pair_graph(present.len(), |i, j| degs[i] == degs[j]);
    let keep = turan_independent_set(&h);
    let mut out = VertexSet::new(g.n());
    for i in &keep {
        out.insert(present[i]);
    }
    out
}

/// From separated expected degrees to genuine distinct degrees: sort `U` by
/// expected degree, keep every third vertex, sample `S ~ G(p)` and keep one
/// vertex per realized degree. The unthinned `U` is scored on the same
/// sample and the better of the two kept; the best of `attempts` samples
/// wins.
pub fn separated_to_distinct<R: Rng + ?Sized>(
    g: &Graph,
    w: &SeparatedWitness,
    attempts: usize,
    rng: &mut R,
) -> Result<DistinctWitness> {
    if w.len() < 2 {
        return Err(Error::InvalidWitness("separated set has fewer than two vertices".into()));
    }
    if w.gap() < 1.0 {
        return Err(Error::InvalidWitness(format!("separation {} below 1", w.gap())));
    }
    let domain = w.p().domain();
    let mut ordered: Vec<(f64, usize)> = w
        .u()
        .iter()
        .map(|u| (expected_degree_dense(g, w.p().values(), u, domain), u))
        .collect();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let all: Vec<usize> = ordered.iter().map(|x| x.1).collect();
    let thinned: Vec<usize> = if all.len() < 3 {
        all.clone()
    } else {
        all.iter().skip(2).step_by(3).copied().collect()
    };
    let seed = Seed::draw(rng);
    let tries = par::map_indexed(attempts.max(1), |a| {
        let s = sample_retained(w.p(), seed.child(a as u64));
        let thin = distinct_representatives(g, &s, &thinned);
        let full = distinct_representatives(g, &s, &all);
        let keep = if full.len() > thin.len() { full } else { thin };
        (keep.len(), s, keep)
    });
    let best = tries.into_iter().fold(None, |best: Option<(usize, VertexSet, VertexSet)>, t| match &best {
        Some(b) if b.0 >= t.0 => best,
        _ => Some(t),
    });
    match best {
        Some((k, s, keep)) if k > 0 => DistinctWitness::new(g, s, keep),
        _ => DistinctWitness::singleton(g, all[0]),
    }
}

/// Turns a distinct-degree witness into a distribution: `½ + α` on `S` and
/// `½` elsewhere, `α ~ U[−0.4, 0.4]`. Pairs of `U` with degree gap `d` then
/// have `bad ≤ 2 / (0.8 d)`.
pub fn distinct_to_distribution(g: &Graph, s: &VertexSet, u: &VertexSet) -> Result<Distribution> {
    DistinctWitness::new(g, s.clone(), u.clone())?;
    Ok(Distribution::uniform_constant(s.clone()).completed())
}
