use serde::Serialize;

use super::DEFAULT_HOM_CAP;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Bitmask width used by the clique search.
const WIDTH: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HomKind {
    Clique,
    Independent,
}

/// `hom(G)` with a largest homogeneous set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactHom {
    pub hom: usize,
    pub kind: HomKind,
    pub witness: Vec<usize>,
}

pub fn exact_hom(g: &Graph) -> Result<ExactHom> {
    exact_hom_with_cap(g, DEFAULT_HOM_CAP)
}

/// Larger of the clique and independence numbers, by branch and bound on `G`
/// and its complement.
pub fn exact_hom_with_cap(g: &Graph, cap: usize) -> Result<ExactHom> {
    check(g, cap)?;
    let clique = max_clique_unchecked(g);
    let independent = max_clique_unchecked(&g.complement());
    Ok(if independent.len() > clique.len() {
        ExactHom {
            hom: independent.len(),
            kind: HomKind::Independent,
            witness: independent,
        }
    } else {
        ExactHom {
            hom: clique.len(),
            kind: HomKind::Clique,
            witness: clique,
        }
    })
}

/// A maximum clique, vertices in increasing order.
pub fn max_clique(g: &Graph, cap: usize) -> Result<Vec<usize>> {
    check(g, cap)?;
    Ok(max_clique_unchecked(g))
}

fn check(g: &Graph, cap: usize) -> Result<()> {
    let limit = cap.min(WIDTH);
    if g.n() > limit {
        return Err(Error::TooLarge {
            what: "graph for exact hom",
            size: g.n(),
            cap: limit,
        });
    }
    Ok(())
}

fn max_clique_unchecked(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let adj: Vec<u128> = (0..n)
        .map(|u| g.neighbors(u).fold(0u128, |m, v| m | 1 << v))
        .collect();
    let mut search = Search {
        adj: &adj,
        best: 0,
        best_len: 0,
    };
    let all = if n == 0 { 0 } else { u128::MAX >> (WIDTH - n) };
    search.expand(0, 0, all);
    let mut out: Vec<usize> = (0..n).filter(|&v| search.best >> v & 1 == 1).collect();
    out.sort_unstable();
    out
}

struct Search<'a> {
    adj: &'a [u128],
    best: u128,
    best_len: usize,
}

impl Search<'_> {
    /// Greedy colouring of `cand`: vertices listed with their colour number,
    /// non-decreasing, so colour bounds the clique size of any suffix.
    fn colour(&self, mut cand: u128) -> Vec<(usize, usize)> {
        let mut order = Vec::with_capacity(cand.count_ones() as usize);
        let mut colour = 0;
        while cand != 0 {
            colour += 1;
            let mut free = cand;
            while free != 0 {
                let v = free.trailing_zeros() as usize;
                free &= !(1 << v);
                free &= !self.adj[v];
                cand &= !(1 << v);
                order.push((v, colour));
            }
        }
        order
    }

    fn expand(&mut self, clique: u128, size: usize, mut cand: u128) {
        if cand == 0 {
            if size > self.best_len {
                self.best = clique;
                self.best_len = size;
            }
            return;
        }
        let order = self.colour(cand);
        for &(v, colour) in order.iter().rev() {
            if size + colour <= self.best_len {
                return;
            }
            self.expand(clique | 1 << v, size + 1, cand & self.adj[v]);
            cand &= !(1 << v);
        }
    }
}
