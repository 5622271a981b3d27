//! Immutable simple graphs over dense vertex indices `[0, n)`.
//!
//! Adjacency is stored as one packed bitrow per vertex, so the degree of a
//! vertex into any [`VertexSet`] is a masked popcount.

mod io;
mod vertex_set;

pub use io::{parse_edge_list, read_edge_list, to_edge_list, write_edge_list};
pub use vertex_set::VertexSet;
pub(crate) use vertex_set::{and_count, words_for};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

/// Mutable adjacency used while a graph is being assembled.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        let stride = words_for(n);
        GraphBuilder {
            n,
            stride,
            rows: vec![0; n * stride],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds the edge `uv`. Panics on a self-loop or an out-of-range index.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "edge ({u}, {v}) out of range");
        assert_ne!(u, v, "self-loop at {u}");
        self.rows[u * self.stride + (v >> 6)] |= 1 << (v & 63);
        self.rows[v * self.stride + (u >> 6)] |= 1 << (u & 63);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.stride + (v >> 6)] >> (v & 63) & 1 == 1
    }

    pub fn build(self) -> Graph {
        Graph {
            n: self.n,
            stride: self.stride,
            rows: self.rows,
        }
    }
}

/// An induced subgraph together with the map from its vertices back to the
/// parent graph: vertex `i` of `graph` is vertex `vertices[i]` of the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub vertices: Vec<usize>,
}

impl InducedSubgraph {
    /// Maps a set over the subgraph back to the parent graph of size `parent_n`.
    pub fn lift(&self, set: &VertexSet, parent_n: usize) -> VertexSet {
        let mut out = VertexSet::new(parent_n);
        for v in set {
            out.insert(self.vertices[v]);
        }
        out
    }
}

/// Maximum, minimum and average degree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeStats {
    pub max: usize,
    pub min: usize,
    pub average: f64,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Graph> {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidPair(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::InvalidPair(format!("self-loop at {u}")));
            }
            b.add_edge(u, v);
        }
        Ok(b.build())
    }

    pub fn empty(n: usize) -> Graph {
        GraphBuilder::new(n).build()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::empty(n).complement()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Packed neighbour bitrow of `u`.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.stride..(u + 1) * self.stride]
    }

    /// Neighbourhood of `u` as an owned set.
    pub fn neighborhood(&self, u: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(u).to_vec())
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(u);
        row.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + tz)
                }
            })
        })
    }

    /// Neighbours of `u` inside `set`, in increasing order.
    pub fn neighbors_in<'a>(&'a self, u: usize, set: &'a VertexSet) -> impl Iterator<Item = usize> + 'a {
        let row = self.row(u);
        row.iter().zip(set.words()).enumerate().flat_map(|(i, (&w, &m))| {
            let mut w = w & m;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + tz)
                }
            })
        })
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.stride + (v >> 6)] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `d^S(u) = |N(u) ∩ S|`.
    #[inline]
    pub fn deg_to(&self, u: usize, set: &VertexSet) -> usize {
        debug_assert_eq!(set.universe(), self.n);
        and_count(self.row(u), set.words())
    }

    pub fn complement(&self) -> Graph {
        let mut rows = Vec::with_capacity(self.rows.len());
        let full = VertexSet::full(self.n);
        for u in 0..self.n {
            for (w, m) in self.row(u).iter().zip(full.words()) {
                rows.push(!w & m);
            }
            let start = u * self.stride;
            rows[start + (u >> 6)] &= !(1 << (u & 63));
        }
        Graph {
            n: self.n,
            stride: self.stride,
            rows,
        }
    }

    /// `G[S]`, with the map from new indices back to `G`.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<InducedSubgraph> {
        if set.universe() != self.n {
            return Err(Error::InvalidSet(format!(
                "set over [0, {}) used with a graph on {} vertices",
                set.universe(),
                self.n
            )));
        }
        let vertices = set.to_vec();
        let m = vertices.len();
        let mut b = GraphBuilder::new(m);
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    b.add_edge(i, j);
                }
            }
        }
        Ok(InducedSubgraph { graph: b.build(), vertices })
    }

    /// `|N^S(u) △ N^S(v)|`.
    pub fn diversity(&self, u: usize, v: usize, set: &VertexSet) -> Result<usize> {
        if u == v {
            return Err(Error::InvalidPair(format!("diversity of {u} with itself")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidPair(format!("({u}, {v}) out of range")));
        }
        Ok(self.diversity_unchecked(u, v, set))
    }

    #[inline]
    pub(crate) fn diversity_unchecked(&self, u: usize, v: usize, set: &VertexSet) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .zip(set.words())
            .map(|((a, b), m)| ((a ^ b) & m).count_ones() as usize)
            .sum()
    }

    /// Number of distinct degrees in `G[S]`.
    pub fn distinct_degree_count(&self, set: &VertexSet) -> Result<usize> {
        if set.universe() != self.n {
            return Err(Error::InvalidSet("universe mismatch".into()));
        }
        if set.is_empty() {
            return Err(Error::InvalidSet("empty set has no degrees".into()));
        }
        let mut seen = vec![false; set.len()];
        let mut count = 0;
        for v in set {
            let d = self.deg_to(v, set);
            if !seen[d] {
                seen[d] = true;
                count += 1;
            }
        }
        Ok(count)
    }

    /// Whether the vertices of `u_set` have pairwise distinct degrees in `G[S]`.
    pub fn has_distinct_degrees(&self, s_set: &VertexSet, u_set: &VertexSet) -> bool {
        let mut seen = vec![false; self.n.max(1)];
        for u in u_set {
            if !s_set.contains(u) {
                return false;
            }
            let d = self.deg_to(u, s_set);
            if seen[d] {
                return false;
            }
            seen[d] = true;
        }
        true
    }

    pub fn degree_stats(&self) -> DegreeStats {
        if self.n == 0 {
            return DegreeStats {
                max: 0,
                min: 0,
                average: 0.0,
            };
        }
        let degrees = self.degrees();
        DegreeStats {
            max: *degrees.iter().max().unwrap(),
            min: *degrees.iter().min().unwrap(),
            average: degrees.iter().sum::<usize>() as f64 / self.n as f64,
        }
    }

    /// Degree statistics of `G[S]` without materializing the subgraph.
    pub fn degree_stats_in(&self, set: &VertexSet) -> DegreeStats {
        let mut max = 0;
        let mut min = usize::MAX;
        let mut total = 0;
        let mut count = 0;
        for v in set {
            let d = self.deg_to(v, set);
            max = max.max(d);
            min = min.min(d);
            total += d;
            count += 1;
        }
        if count == 0 {
            return DegreeStats {
                max: 0,
                min: 0,
                average: 0.0,
            };
        }
        DegreeStats {
            max,
            min,
            average: total as f64 / count as f64,
        }
    }

    /// `U` is `D`-diverse to `S`: every pair of `U` differs on at least `D`
    /// vertices of `S`.
    pub fn is_diverse(&self, u_set: &VertexSet, s_set: &VertexSet, d: f64) -> bool {
        if d <= 0.0 {
            return true;
        }
        let members = u_set.to_vec();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if (self.diversity_unchecked(a, b, s_set) as f64) < d {
                    return false;
                }
            }
        }
        true
    }

    /// Minimum pairwise diversity of `U` to `S` (`None` when `|U| < 2`).
    pub fn min_diversity(&self, u_set: &VertexSet, s_set: &VertexSet) -> Option<usize> {
        let members = u_set.to_vec();
        let mut best: Option<usize> = None;
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                let d = self.diversity_unchecked(a, b, s_set);
                best = Some(best.map_or(d, |x| x.min(d)));
            }
        }
        best
    }

    /// `U` is `γ`-balanced to `S`: every vertex of `S` has at most `γ|U|`
    /// neighbours in `U`.
    pub fn is_balanced(&self, u_set: &VertexSet, s_set: &VertexSet, gamma: f64) -> bool {
        let bound = gamma * u_set.len() as f64;
        s_set.iter().all(|v| self.deg_to(v, u_set) as f64 <= bound)
    }

    /// Smallest `γ` for which `U` is `γ`-balanced to `S`.
    pub fn balance(&self, u_set: &VertexSet, s_set: &VertexSet) -> f64 {
        if u_set.is_empty() {
            return 0.0;
        }
        let worst = s_set.iter().map(|v| self.deg_to(v, u_set)).max().unwrap_or(0);
        worst as f64 / u_set.len() as f64
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_indices(n, v.iter().copied()).unwrap()
    }

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn induced_subgraph_examples() {
        let k4 = Graph::complete(4);
        let sub = k4.induced_subgraph(&set(4, &[0, 1, 2])).unwrap();
        assert_eq!(sub.graph, Graph::complete(3));
        assert_eq!(sub.vertices, vec![0, 1, 2]);

        let sub = path3().induced_subgraph(&set(3, &[0, 2])).unwrap();
        assert_eq!(sub.graph, Graph::empty(2));

        let sub = cycle(5).induced_subgraph(&set(5, &[0, 1, 2])).unwrap();
        assert_eq!(sub.graph, path3());
    }

    #[test]
    fn induced_subgraph_rejects_foreign_set() {
        assert!(matches!(
            Graph::complete(4).induced_subgraph(&VertexSet::full(5)),
            Err(Error::InvalidSet(_))
        ));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Graph::complete(4).complement(), Graph::empty(4));
        assert_eq!(Graph::empty(3).complement(), Graph::complete(3));
        let c5 = cycle(5);
        assert_eq!(c5.complement().complement(), c5);
        // C5 is self-complementary up to relabelling: the complement is 2-regular too.
        assert!(c5.complement().degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn deg_to_examples() {
        assert_eq!(Graph::complete(4).deg_to(0, &set(4, &[1, 2, 3])), 3);
        assert_eq!(cycle(5).deg_to(3, &VertexSet::new(5)), 0);
        assert_eq!(cycle(5).deg_to(0, &set(5, &[1, 2])), 1);
    }

    #[test]
    fn diversity_examples() {
        let k6 = Graph::complete(6);
        assert_eq!(k6.diversity(1, 4, &k6.vertices()).unwrap(), 2);
        let e = Graph::empty(5);
        assert_eq!(e.diversity(0, 3, &e.vertices()).unwrap(), 0);
        let p = path3();
        assert_eq!(p.diversity(0, 2, &p.vertices()).unwrap(), 0);
        assert!(matches!(p.diversity(1, 1, &p.vertices()), Err(Error::InvalidPair(_))));
    }

    #[test]
    fn distinct_degree_examples() {
        let k5 = Graph::complete(5);
        assert_eq!(k5.distinct_degree_count(&k5.vertices()).unwrap(), 1);
        let p = path3();
        assert_eq!(p.distinct_degree_count(&p.vertices()).unwrap(), 2);
        let s = star(4);
        assert_eq!(s.distinct_degree_count(&s.vertices()).unwrap(), 2);
        assert!(matches!(s.distinct_degree_count(&VertexSet::new(5)), Err(Error::InvalidSet(_))));
    }

    #[test]
    fn degree_stats_examples() {
        let st = Graph::complete(4).degree_stats();
        assert_eq!((st.max, st.min, st.average), (3, 3, 3.0));
        let st = star(4).degree_stats();
        assert_eq!((st.max, st.min, st.average), (4, 1, 8.0 / 5.0));
        let st = Graph::empty(3).degree_stats();
        assert_eq!((st.max, st.min, st.average), (0, 0, 0.0));
    }

    #[test]
    fn diverse_and_balanced_examples() {
        let k4 = Graph::complete(4);
        let all = k4.vertices();
        assert!(k4.is_diverse(&set(4, &[0, 1]), &all, 2.0));
        assert!(!k4.is_diverse(&set(4, &[0, 1]), &all, 3.0));
        assert!(cycle(6).is_diverse(&set(6, &[0, 1, 2]), &set(6, &[3]), 0.0));

        assert!(cycle(7).is_balanced(&set(7, &[0, 2]), &set(7, &[1, 3]), 1.0));
        assert!(!k4.is_balanced(&set(4, &[0, 1, 2]), &set(4, &[3]), 0.5));
        let e = Graph::empty(4);
        assert!(e.is_balanced(&set(4, &[0, 1]), &set(4, &[2, 3]), 0.0));
    }

    #[test]
    fn edges_are_lexicographic() {
        let g = Graph::from_edges(4, [(3, 0), (1, 2), (0, 1)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (1, 2)]);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn from_edges_rejects_loops() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(1, 3)]).is_err());
    }
}
