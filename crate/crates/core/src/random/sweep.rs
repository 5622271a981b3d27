use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    convenient_target, gnp_realize_with, gnp_separate_with, p_convenient_set, sparse_distinct, sparse_select,
    upper_bound_ceiling, hom_bound, constants::ATTEMPTS,
};
use crate::error::{Error, Result};
use crate::exact::{exact_f, exact_hom, DEFAULT_F_CAP, DEFAULT_HOM_CAP};
use crate::generators::gnp;
use crate::graph::Graph;
use crate::pipeline::turan_independent_set;
use crate::rng::Seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `p ∈ [n^{-1/2}, 1/2]`, convenient-set chain.
    Dense,
    /// `p ∈ [n^{-3/4}, n^{-1/2}/2]`, private neighbourhoods.
    Sparse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PGrid {
    /// `p_points` geometric steps across the regime's range.
    Geometric,
    /// Exactly the values in `p_values`.
    List,
}

/// Grid of `(n, p, seed)` cells. Parsed from JSON; missing fields take
/// their defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    pub p_grid: PGrid,
    pub p_points: usize,
    pub p_values: Vec<f64>,
    pub seeds: usize,
    pub regime: Regime,
    pub base_seed: u64,
    /// Record wall-clock time per cell. Off by default so output is
    /// reproducible byte for byte.
    pub timing: bool,
    pub attempts: usize,
    /// Cells with `n` at most this also get the exact `f`.
    pub exact_cap: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: vec![4096],
            p_grid: PGrid::Geometric,
            p_points: 6,
            p_values: Vec::new(),
            seeds: 5,
            regime: Regime::Dense,
            base_seed: 0,
            timing: false,
            attempts: ATTEMPTS,
            exact_cap: DEFAULT_F_CAP,
        }
    }
}

/// How a cell's witness was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellMethod {
    Pipeline,
    Sparse,
    /// Every step failed; `f_lower` is the trivial 1.
    Failed,
}

impl CellMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CellMethod::Pipeline => "pipeline",
            CellMethod::Sparse => "sparse",
            CellMethod::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub f_lower: usize,
    pub f_exact: Option<usize>,
    pub delta: usize,
    /// `hom ≤ 4 ln(n) / p`. Exact up to the hom oracle's cap; above it only
    /// a greedy lower bound on `hom` is compared, so `true` is not a proof.
    pub hom_bound_ok: bool,
    pub method: CellMethod,
    pub wall_ms: Option<u64>,
    /// Why the construction failed, when it did.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// The `p` values of the sweep for a given `n`.
pub fn p_grid(cfg: &SweepConfig, n: usize) -> Result<Vec<f64>> {
    if cfg.p_grid == PGrid::List {
        if cfg.p_values.is_empty() {
            return Err(Error::InvalidParams("p_grid is \"list\" but p_values is empty".into()));
        }
        return Ok(cfg.p_values.clone());
    }
    let n_f = n as f64;
    let (lo, hi) = match cfg.regime {
        Regime::Dense => (n_f.powf(-0.5), 0.5),
        Regime::Sparse => (n_f.powf(-0.75), n_f.powf(-0.5) / 2.0),
    };
    let points = cfg.p_points;
    if points == 0 {
        return Err(Error::InvalidParams("p_points must be positive".into()));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    Ok((0..points).map(|i| if i + 1 == points { hi } else { lo * (ratio * i as f64).exp() }).collect())
}

/// Runs one cell. The graph for seed index `s` is `G(n, p)` drawn with
/// `Seed(base).child(s)`, so cells sharing `n` and `s` are coupled: the
/// graph for a smaller `p` is a subgraph of the one for a larger `p`.
pub fn run_cell(cfg: &SweepConfig, n: usize, p: f64, seed: u64) -> Result<ExperimentRecord> {
    let started = Instant::now();
    let graph_seed = Seed(cfg.base_seed).child(seed);
    let g = gnp(n, p, graph_seed)?;
    let mut rng = graph_seed.child(p.to_bits()).rng();

    let outcome = match cfg.regime {
        Regime::Dense => p_convenient_set(&g, p, convenient_target(n, p))
            .and_then(|w| gnp_separate_with(&g, &w, cfg.attempts, &mut rng))
            .and_then(|s| gnp_realize_with(&g, &s, cfg.attempts, &mut rng))
            .map(|w| (w.k(), CellMethod::Pipeline)),
        Regime::Sparse => {
            let u = sparse_select(&g);
            if u.is_empty() {
                Err(Error::NotPrivate("no vertex has a private neighbour".into()))
            } else {
                sparse_distinct(&g, &u).map(|w| (w.k(), CellMethod::Sparse))
            }
        }
    };
    let (f_lower, method, failure) = match outcome {
        Ok((k, m)) => (k, m, None),
        Err(e) => (1, CellMethod::Failed, Some(e.to_string())),
    };
    let f_exact = if n <= cfg.exact_cap { Some(exact_f(&g)?.f) } else { None };
    if let Some(f) = f_exact {
        debug_assert!(f_lower <= f);
    }
    Ok(ExperimentRecord {
        n,
        p,
        seed,
        f_lower,
        f_exact,
        delta: g.degree_stats().max,
        hom_bound_ok: hom_within_bound(&g, p)?,
        method,
        wall_ms: cfg.timing.then(|| started.elapsed().as_millis() as u64),
        failure,
    })
}

fn hom_within_bound(g: &Graph, p: f64) -> Result<bool> {
    let hom = if g.n() <= DEFAULT_HOM_CAP {
        exact_hom(g)?.hom
    } else {
        turan_independent_set(g).len().max(turan_independent_set(&g.complement()).len())
    };
    Ok(hom as f64 <= hom_bound(g.n(), p))
}

/// Least-squares fit of `ln f_lower` against `ln(pn²)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    /// `(n, p)` groups used and skipped for having too few successes.
    pub groups_used: usize,
    pub groups_skipped: usize,
}

/// Share of a group's seeds that must succeed for the group to enter the fit.
pub const FIT_MIN_SUCCESS: f64 = 0.6;

/// Fits over the successful cells of every `(n, p)` group in which at least
/// 60% of the cells succeeded. `None` when fewer than two distinct `pn²`
/// values remain.
pub fn fit_slope(records: &[ExperimentRecord]) -> Option<SlopeFit> {
    let mut groups: BTreeMap<(usize, u64), Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.n, r.p.to_bits())).or_default().push(r);
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let (mut used, mut skipped) = (0, 0);
    for cells in groups.values() {
        let ok: Vec<_> = cells.iter().filter(|r| r.method != CellMethod::Failed).collect();
        if (ok.len() as f64) < FIT_MIN_SUCCESS * cells.len() as f64 {
            skipped += 1;
            continue;
        }
        used += 1;
        for r in ok {
            let n = r.n as f64;
            xs.push((r.p * n * n).ln());
            ys.push((r.f_lower as f64).ln());
        }
    }
    let count = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / count;
    let my = ys.iter().sum::<f64>() / count;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if xs.len() < 2 || sxx < 1e-12 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some(SlopeFit {
        slope,
        intercept: my - slope * mx,
        points: xs.len(),
        groups_used: used,
        groups_skipped: skipped,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub records: Vec<ExperimentRecord>,
    /// Present for dense sweeps with enough usable groups.
    pub fit: Option<SlopeFit>,
    /// Cells whose `f_lower` exceeds `128 ∛(pn²)`.
    pub ceiling_violations: usize,
    pub failures: usize,
}

/// Runs every cell (in parallel when enabled) and returns the records
/// sorted by `(n, p, seed)`. `on_record` sees each record as soon as its
/// cell finishes, in completion order.
pub fn scaling_sweep<F>(cfg: &SweepConfig, on_record: F) -> Result<SweepResult>
where
    F: Fn(&ExperimentRecord) + Sync + Send,
{
    if cfg.n.is_empty() || cfg.seeds == 0 {
        return Err(Error::InvalidParams("sweep needs at least one n and one seed".into()));
    }
    let mut cells = Vec::new();
    for &n in &cfg.n {
        for p in p_grid(cfg, n)? {
            if !(p > 0.0 && p <= 0.5) {
                return Err(Error::InvalidParams(format!("p = {p} outside (0, 1/2]")));
            }
            cells.extend((0..cfg.seeds as u64).map(|s| (n, p, s)));
        }
    }
    let results = crate::par::map_indexed(cells.len(), |i| {
        let (n, p, s) = cells[i];
        let r = run_cell(cfg, n, p, s);
        if let Ok(rec) = &r {
            on_record(rec);
        }
        r
    });
    let mut records = results.into_iter().collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| (a.n, a.p, a.seed).partial_cmp(&(b.n, b.p, b.seed)).expect("finite p"));
    let ceiling_violations = records.iter().filter(|r| r.f_lower > upper_bound_ceiling(r.n, r.p)).count();
    let failures = records.iter().filter(|r| r.method == CellMethod::Failed).count();
    let fit = match cfg.regime {
        Regime::Dense => fit_slope(&records),
        Regime::Sparse => None,
    };
    Ok(SweepResult {
        records,
        fit,
        ceiling_violations,
        failures,
    })
}

pub const CSV_HEADER: [&str; 9] = ["n", "p", "seed", "f_lower", "f_exact", "delta", "hom_bound_ok", "method", "wall_ms"];

/// Writes records as CSV with the fixed column order. Optional values are
/// left blank.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.p.to_string(),
            r.seed.to_string(),
            r.f_lower.to_string(),
            r.f_exact.map(|f| f.to_string()).unwrap_or_default(),
            r.delta.to_string(),
            r.hom_bound_ok.to_string(),
            r.method.as_str().to_string(),
            r.wall_ms.map(|t| t.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
