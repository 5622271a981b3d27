//! Extremal families and seeded random graphs.

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::par;
use crate::rng::{pair_uniform, Seed};

/// Part index of every vertex when `[0, n)` is split into `k` contiguous
/// parts whose sizes differ by at most one (larger parts first).
fn balanced_parts(n: usize, k: usize) -> Vec<usize> {
    let small = n / k;
    let extra = n % k;
    let mut parts = Vec::with_capacity(n);
    for p in 0..k {
        let size = small + usize::from(p < extra);
        parts.extend(std::iter::repeat_n(p, size));
    }
    parts
}

fn from_relation(n: usize, related: impl Fn(usize, usize) -> bool) -> Graph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if related(u, v) {
                b.add_edge(u, v);
            }
        }
    }
    b.build()
}

/// Complete `k`-partite graph on `n` vertices with balanced parts.
pub fn turan(n: usize, k: usize) -> Result<Graph> {
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!("turan needs 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let parts = balanced_parts(n, k);
    Ok(from_relation(n, |u, v| parts[u] != parts[v]))
}

/// `b` blocks of `n / b` vertices, all cross-block pairs joined; inside each
/// block the complement of the `√n`-partite Turán graph, i.e. `√n` disjoint
/// cliques.
pub fn iterated_turan(n: usize, b: usize) -> Result<Graph> {
    iterated_turan_with(n, b, None)
}

/// [`iterated_turan`] with an explicit inner part count instead of `√n`.
pub fn iterated_turan_with(n: usize, b: usize, inner_parts: Option<usize>) -> Result<Graph> {
    if b == 0 || n == 0 || !n.is_multiple_of(b) {
        return Err(Error::InvalidParams(format!("block count {b} must divide n = {n}")));
    }
    let block = n / b;
    let r = match inner_parts {
        Some(r) => r,
        None => {
            let r = n.isqrt();
            if r * r != n {
                return Err(Error::InvalidParams(format!("n = {n} is not a perfect square")));
            }
            r
        }
    };
    if r == 0 || r > block || !block.is_multiple_of(r) {
        return Err(Error::InvalidParams(format!(
            "inner part count {r} must divide the block size {block}"
        )));
    }
    let clique = block / r;
    Ok(from_relation(n, |u, v| u / block != v / block || (u % block) / clique == (v % block) / clique))
}

/// Erdős–Rényi `G(n, p)`. Pair `{u, v}` is an edge iff its seeded hash falls
/// below `p`, so the graph does not depend on generation order.
pub fn gnp(n: usize, p: f64, seed: Seed) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("edge probability {p} outside [0, 1]")));
    }
    let rows = par::map_indexed(n, |u| {
        (u + 1..n).filter(|&v| pair_uniform(seed.0, u, v) < p).collect::<Vec<_>>()
    });
    let mut b = GraphBuilder::new(n);
    for (u, row) in rows.into_iter().enumerate() {
        for v in row {
            b.add_edge(u, v);
        }
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turan_parts_are_balanced() {
        let g = turan(10, 3).unwrap();
        // parts 4,3,3: degrees 6 and 7
        let mut d = g.degrees();
        d.sort();
        assert_eq!(d, vec![6, 6, 6, 6, 7, 7, 7, 7, 7, 7]);
        assert_eq!(turan(12, 3).unwrap().edge_count(), 48);
    }

    #[test]
    fn turan_degenerate() {
        assert_eq!(turan(6, 6).unwrap(), Graph::complete(6));
        assert_eq!(turan(6, 1).unwrap(), Graph::empty(6));
        assert!(turan(6, 0).is_err());
        assert!(turan(6, 7).is_err());
    }

    #[test]
    fn iterated_turan_single_block_is_turan_complement() {
        assert_eq!(iterated_turan(16, 1).unwrap(), turan(16, 4).unwrap().complement());
    }

    #[test]
    fn iterated_turan_is_regular() {
        for (n, b) in [(16, 2), (36, 2), (36, 3), (64, 2), (64, 4)] {
            let g = iterated_turan(n, b).unwrap();
            let r = n.isqrt();
            let expected = n - n / b + n / b / r - 1;
            assert!(g.degrees().iter().all(|&d| d == expected), "n={n} b={b}");
        }
    }

    #[test]
    fn iterated_turan_rejects_unclean_parameters() {
        assert!(iterated_turan(15, 2).is_err());
        assert!(iterated_turan(18, 2).is_err());
        assert!(iterated_turan(16, 8).is_err());
        assert!(iterated_turan_with(24, 2, Some(3)).is_ok());
    }

    #[test]
    fn gnp_extremes_and_determinism() {
        assert_eq!(gnp(10, 0.0, Seed(3)).unwrap(), Graph::empty(10));
        assert_eq!(gnp(10, 1.0, Seed(3)).unwrap(), Graph::complete(10));
        assert_eq!(gnp(50, 0.3, Seed(9)).unwrap(), gnp(50, 0.3, Seed(9)).unwrap());
        assert_ne!(gnp(50, 0.3, Seed(9)).unwrap(), gnp(50, 0.3, Seed(10)).unwrap());
        assert!(gnp(5, 1.5, Seed(0)).is_err());
        assert!(gnp(5, -0.1, Seed(0)).is_err());
    }

    #[test]
    fn gnp_mean_edge_count() {
        let total: usize = (0..1000).map(|s| gnp(10, 0.5, Seed(s)).unwrap().edge_count()).sum();
        let mean = total as f64 / 1000.0;
        assert!((mean - 22.5).abs() <= 1.5, "mean {mean}");
    }
}
