use serde::Serialize;

use super::DEFAULT_F_CAP;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::par;

/// `f(G)` together with a set attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactF {
    pub f: usize,
    pub witness: Vec<usize>,
}

pub fn exact_f(g: &Graph) -> Result<ExactF> {
    exact_f_with_cap(g, DEFAULT_F_CAP)
}

/// Maximum number of distinct degrees over all nonempty induced subgraphs.
///
/// The top bits of the subset mask are fixed per task; each task walks the
/// remaining bits in Gray-code order, moving one vertex in or out per step and
/// patching a degree histogram. Ties between tasks go to the lowest prefix,
/// so the witness is independent of the thread count.
pub fn exact_f_with_cap(g: &Graph, cap: usize) -> Result<ExactF> {
    let n = g.n();
    if n > cap || n > 30 {
        return Err(Error::TooLarge {
            what: "graph for exact f",
            size: n,
            cap: cap.min(30),
        });
    }
    if n == 0 {
        return Err(Error::InvalidSet("graph has no vertices".into()));
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|u| g.neighbors(u).collect()).collect();
    let prefix_bits = n.min(6);
    let low_bits = n - prefix_bits;
    let results = par::map_indexed(1 << prefix_bits, |prefix| {
        let mut walk = Walk::new(n, &adj);
        for b in 0..prefix_bits {
            if prefix >> b & 1 == 1 {
                walk.toggle(low_bits + b);
            }
        }
        let mut best = (walk.distinct, walk.mask);
        for i in 1u32..(1 << low_bits) {
            let bit = i.trailing_zeros() as usize;
            walk.toggle(bit);
            if walk.distinct > best.0 {
                best = (walk.distinct, walk.mask);
            }
        }
        best
    });
    let (f, mask) = results
        .into_iter()
        .fold((0, 0), |acc, r| if r.0 > acc.0 { r } else { acc });
    let witness = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    Ok(ExactF { f, witness })
}

struct Walk<'a> {
    adj: &'a [Vec<usize>],
    mask: u32,
    deg: Vec<usize>,
    hist: Vec<u32>,
    distinct: usize,
}

impl<'a> Walk<'a> {
    fn new(n: usize, adj: &'a [Vec<usize>]) -> Self {
        Walk {
            adj,
            mask: 0,
            deg: vec![0; n],
            hist: vec![0; n + 1],
            distinct: 0,
        }
    }

    #[inline]
    fn bump(&mut self, d: usize) {
        if self.hist[d] == 0 {
            self.distinct += 1;
        }
        self.hist[d] += 1;
    }

    #[inline]
    fn drop(&mut self, d: usize) {
        self.hist[d] -= 1;
        if self.hist[d] == 0 {
            self.distinct -= 1;
        }
    }

    fn toggle(&mut self, x: usize) {
        let adj = self.adj;
        if self.mask >> x & 1 == 0 {
            for &y in &adj[x] {
                if self.mask >> y & 1 == 1 {
                    self.drop(self.deg[y]);
                    self.bump(self.deg[y] + 1);
                }
                self.deg[y] += 1;
            }
            self.mask |= 1 << x;
            self.bump(self.deg[x]);
        } else {
            self.mask &= !(1 << x);
            self.drop(self.deg[x]);
            for &y in &adj[x] {
                if self.mask >> y & 1 == 1 {
                    self.drop(self.deg[y]);
                    self.bump(self.deg[y] - 1);
                }
                self.deg[y] -= 1;
            }
        }
    }
}

impl ExactF {
    pub fn witness_set(&self, n: usize) -> VertexSet {
        VertexSet::from_indices(n, self.witness.iter().copied()).expect("witness within range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::turan;

    fn brute(g: &Graph) -> usize {
        let n = g.n();
        (1u32..1 << n)
            .map(|m| {
                let s = VertexSet::from_indices(n, (0..n).filter(|&v| m >> v & 1 == 1)).unwrap();
                g.distinct_degree_count(&s).unwrap()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(exact_f(&Graph::complete(6)).unwrap().f, 1);
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(exact_f(&p3).unwrap().f, 2);
        assert_eq!(exact_f(&turan(12, 3).unwrap()).unwrap().f, 3);
        assert_eq!(exact_f(&Graph::empty(1)).unwrap().f, 1);
    }

    #[test]
    fn witness_attains_value() {
        for seed in 0..20 {
            let g = crate::generators::gnp(9, 0.4, crate::rng::Seed(seed)).unwrap();
            let r = exact_f(&g).unwrap();
            assert_eq!(r.f, brute(&g));
            assert_eq!(g.distinct_degree_count(&r.witness_set(9)).unwrap(), r.f);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            exact_f_with_cap(&Graph::empty(8), 7),
            Err(Error::TooLarge { size: 8, cap: 7, .. })
        ));
    }
}
