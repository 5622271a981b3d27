use serde::{Deserialize, Serialize};

use super::DEFAULT_SMALL_BALL_CAP;
use crate::error::{Error, Result};
use crate::par;

/// Weighted sum `Σ aᵢXᵢ` of independent Bernoulli(`pᵢ`) variables, and the
/// half-width of the window whose largest mass is sought.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallBallInstance {
    weights: Vec<f64>,
    probs: Vec<f64>,
    half_width: f64,
}

impl SmallBallInstance {
    pub fn new(weights: Vec<f64>, probs: Vec<f64>, half_width: f64) -> Result<Self> {
        if weights.len() != probs.len() {
            return Err(Error::InvalidParams(format!(
                "{} weights but {} probabilities",
                weights.len(),
                probs.len()
            )));
        }
        if let Some(a) = weights.iter().find(|a| **a == 0.0 || !a.is_finite()) {
            return Err(Error::InvalidParams(format!("weight {a} must be nonzero and finite")));
        }
        if let Some(p) = probs.iter().find(|p| !(0.1..=0.9).contains(*p)) {
            return Err(Error::InvalidParams(format!("probability {p} outside [0.1, 0.9]")));
        }
        if !(half_width >= 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidParams(format!("half-width {half_width} must be >= 0")));
        }
        Ok(SmallBallInstance {
            weights,
            probs,
            half_width,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }
}

pub fn exact_small_ball(inst: &SmallBallInstance) -> Result<f64> {
    exact_small_ball_with_cap(inst, DEFAULT_SMALL_BALL_CAP)
}

/// `max_c P(|Σ aᵢXᵢ − c| ≤ w)` over all `2^n` outcomes.
///
/// Some optimal window starts at an atom, so sorting the atoms and sliding a
/// window of width `2w` from each one is exact. Atom positions are compared
/// with a relative tolerance of `1e-9` so that sums equal in exact arithmetic
/// are not split by rounding.
pub fn exact_small_ball_with_cap(inst: &SmallBallInstance, cap: usize) -> Result<f64> {
    let n = inst.len();
    if n > cap || n > 30 {
        return Err(Error::TooLarge {
            what: "small-ball instance",
            size: n,
            cap: cap.min(30),
        });
    }
    let mut atoms = vec![(0.0f64, 1.0f64)];
    atoms.reserve((1 << n) - 1);
    for (&a, &p) in inst.weights.iter().zip(&inst.probs) {
        let len = atoms.len();
        for i in 0..len {
            let (x, q) = atoms[i];
            atoms[i] = (x, q * (1.0 - p));
            atoms.push((x + a, q * p));
        }
    }
    par::sort_by_f64_key(&mut atoms, |a| a.0);

    let scale = atoms.iter().fold(1.0f64, |m, a| m.max(a.0.abs()));
    let reach = 2.0 * inst.half_width + 1e-9 * scale;
    let mut prefix = Vec::with_capacity(atoms.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for a in &atoms {
        acc += a.1;
        prefix.push(acc);
    }
    let mut best = 0.0f64;
    let mut right = 0;
    for left in 0..atoms.len() {
        right = right.max(left);
        while right + 1 < atoms.len() && atoms[right + 1].0 - atoms[left].0 <= reach {
            right += 1;
        }
        best = best.max(prefix[right + 1] - prefix[left]);
    }
    Ok(best.min(1.0))
}

/// `C(n, ⌊n/2⌋) / 2^n`, the largest point mass of a sum of `n` fair coins.
pub fn lo_reference(n: usize) -> f64 {
    let k = n / 2;
    if n <= 120 {
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        return c as f64 / 2f64.powi(n as i32);
    }
    let ln: f64 = (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum();
    (ln - n as f64 * std::f64::consts::LN_2).exp()
}
