use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use degdiv::distributions::{BadEstimator, DistributionSpec};
use degdiv::exact::{exact_f_with_cap, exact_hom_with_cap};
use degdiv::generators::{gnp, iterated_turan_with, turan};
use degdiv::graph::{read_edge_list, to_edge_list};
use degdiv::pipeline::{find_distinct_degrees, DistinctWitness, PipelineConfig};
use degdiv::random::{scaling_sweep, write_csv, SweepConfig};
use degdiv::{Graph, Seed, VertexSet};

use crate::manifest::{beside, now_ms, RunManifest, SCHEMA};
use crate::{Command, Family, What};

/// Bad command-line input not caught by the argument parser.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Usage(pub String);

/// A witness or result that failed its check.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Rejected(pub String);

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Gen {
            family,
            n,
            k,
            b,
            inner,
            p,
            seed,
            out,
        } => gen(family, n, k, b, inner, p, seed, out),
        Command::Exact {
            graph,
            what,
            f_cap,
            hom_cap,
            out,
        } => exact(&graph, what, f_cap, hom_cap, out),
        Command::Find {
            graph,
            seed,
            config,
            out,
        } => find(&graph, seed, config, out),
        Command::Bad {
            graph,
            dist,
            u,
            v,
            s,
            trials,
            half_width,
            seed,
            out,
        } => bad(&graph, &dist, u, v, s, trials, half_width, seed, out),
        Command::Experiment { config, out } => experiment(&config, &out),
        Command::Verify { graph, witness } => verify(&graph, &witness),
    }
}

fn required<T>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| Usage(format!("--{flag} is required for --family {family}")).into())
}

fn load_graph(path: &Path) -> Result<Graph> {
    read_edge_list(path).with_context(|| format!("reading graph {}", path.display()))
}

/// Reads a JSON config, checking and stripping the optional `schema` field.
fn load_config<T: DeserializeOwned>(path: &Path) -> Result<(T, Value)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut value: Value = serde_json::from_str(&text)?;
    if let Some(obj) = value.as_object_mut() {
        if let Some(schema) = obj.remove("schema") {
            if schema.as_u64() != Some(SCHEMA) {
                return Err(Usage(format!("unsupported config schema {schema}, expected {SCHEMA}")).into());
            }
        }
    }
    let parsed = serde_json::from_value(value.clone())?;
    Ok((parsed, value))
}

/// Prints `result` and, with `--out`, also writes it with a manifest.
fn emit(result: &Value, out: Option<PathBuf>, manifest: RunManifest) -> Result<()> {
    let text = serde_json::to_string(result)?;
    println!("{text}");
    if let Some(path) = out {
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        manifest.write(&beside(&path), vec![path])?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn gen(
    family: Family,
    n: usize,
    k: Option<usize>,
    b: Option<usize>,
    inner: Option<usize>,
    p: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<()> {
    let started = now_ms();
    let mut used_seed = None;
    let (g, name) = match family {
        Family::Turan => (turan(n, required(k, "k", "turan")?)?, "turan"),
        Family::IteratedTuran => (
            iterated_turan_with(n, required(b, "b", "iterated-turan")?, inner)?,
            "iterated-turan",
        ),
        Family::Gnp => {
            let p = required(p, "p", "gnp")?;
            let s = seed.unwrap_or_else(rand::random);
            used_seed = Some(s);
            (gnp(n, p, Seed(s))?, "gnp")
        }
    };
    let text = to_edge_list(&g);
    let summary = format!("{} {} {name}", g.n(), g.edge_count());
    match out {
        Some(path) => {
            fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            println!("{summary}");
            let config = json!({"family": family, "n": n, "k": k, "b": b, "inner": inner, "p": p});
            RunManifest::new("gen", config, used_seed, started).write(&beside(&path), vec![path])?;
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn exact(graph: &Path, what: What, f_cap: usize, hom_cap: usize, out: Option<PathBuf>) -> Result<()> {
    let started = now_ms();
    let g = load_graph(graph)?;
    let mut result = json!({"n": g.n()});
    if matches!(what, What::F | What::Both) {
        let f = exact_f_with_cap(&g, f_cap)?;
        result["f"] = json!(f.f);
        result["witness_set"] = json!(f.witness);
    }
    if matches!(what, What::Hom | What::Both) {
        let h = exact_hom_with_cap(&g, hom_cap)?;
        result["hom"] = json!(h.hom);
        result["hom_kind"] = json!(h.kind);
        result["hom_witness"] = json!(h.witness);
    }
    let config = json!({"graph": graph, "what": what, "f_cap": f_cap, "hom_cap": hom_cap});
    emit(&result, out, RunManifest::new("exact", config, None, started))
}

fn find(graph: &Path, seed: Option<u64>, config: Option<PathBuf>, out: Option<PathBuf>) -> Result<()> {
    let started = now_ms();
    let g = load_graph(graph)?;
    let (cfg, raw): (PipelineConfig, Value) = match &config {
        Some(path) => load_config(path)?,
        None => (PipelineConfig::default(), json!({})),
    };
    let seed = seed.unwrap_or_else(rand::random);
    let found = find_distinct_degrees(&g, &cfg, &mut Seed(seed).rng())?;
    let result = json!({
        "k": found.witness.k(),
        "S": found.witness.s().to_vec(),
        "U": found.witness.u().to_vec(),
        "method": found.method,
        "seed": seed,
    });
    let manifest = RunManifest::new("find", json!({"graph": graph, "config": raw}), Some(seed), started);
    emit(&result, out, manifest)
}

#[allow(clippy::too_many_arguments)]
fn bad(
    graph: &Path,
    dist: &str,
    u: usize,
    v: usize,
    s: Option<Vec<usize>>,
    trials: usize,
    half_width: f64,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<()> {
    let started = now_ms();
    let g = load_graph(graph)?;
    let text = match dist.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading distribution {path}"))?,
        None => dist.to_string(),
    };
    let spec: DistributionSpec = serde_json::from_str(&text)?;
    let distribution = spec.build(g.n())?;
    let s_set = match &s {
        Some(list) => VertexSet::from_indices(g.n(), list.iter().copied())?,
        None => distribution.domain(),
    };
    let seed = seed.unwrap_or_else(rand::random);
    let est = BadEstimator::new(trials)?
        .with_half_width(half_width)
        .estimate(&distribution, &g, u, v, &s_set, Seed(seed))?;
    let result = json!({
        "value": est.value,
        "trials": est.trials,
        "std_err": est.std_err,
        "u": u,
        "v": v,
        "seed": seed,
    });
    let config = json!({"graph": graph, "dist": spec, "u": u, "v": v, "S": s, "trials": trials, "half_width": half_width});
    emit(&result, out, RunManifest::new("bad", config, Some(seed), started))
}

fn experiment(config: &Path, out: &Path) -> Result<()> {
    let started = now_ms();
    let (cfg, raw): (SweepConfig, Value) = load_config(config)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let csv_path = out.join("sweep.csv");
    let partial_path = out.join("sweep.partial.csv");
    let summary_path = out.join("summary.json");

    let partial = Mutex::new(fs::File::create(&partial_path)?);
    writeln!(partial.lock().expect("unpoisoned"), "{}", degdiv::random::CSV_HEADER.join(","))?;
    let result = scaling_sweep(&cfg, |rec| {
        let mut buf = Vec::new();
        if write_csv(std::slice::from_ref(rec), &mut buf).is_ok() {
            let body = buf.splitn(2, |&c| c == b'\n').nth(1).unwrap_or_default().to_vec();
            let mut file = partial.lock().expect("unpoisoned");
            let _ = file.write_all(&body).and_then(|_| file.flush());
        }
    })?;

    write_csv(&result.records, fs::File::create(&csv_path)?)?;
    fs::remove_file(&partial_path)?;
    let summary = json!({
        "cells": result.records.len(),
        "failures": result.failures,
        "ceiling_violations": result.ceiling_violations,
        "fit": result.fit,
        "regime": cfg.regime,
    });
    fs::write(&summary_path, serde_json::to_string_pretty(&summary)? + "\n")?;
    println!("{}", serde_json::to_string(&summary)?);
    RunManifest::new("experiment", raw, Some(cfg.base_seed), started).write(
        &out.join("manifest.json"),
        vec![csv_path, summary_path],
    )
}

#[derive(Deserialize)]
struct WitnessFile {
    #[serde(rename = "S")]
    s: Vec<usize>,
    #[serde(rename = "U")]
    u: Vec<usize>,
}

fn verify(graph: &Path, witness: &Path) -> Result<()> {
    let g = load_graph(graph)?;
    let text = fs::read_to_string(witness).with_context(|| format!("reading witness {}", witness.display()))?;
    let w: WitnessFile = serde_json::from_str(&text)?;
    let s = VertexSet::from_indices(g.n(), w.s)?;
    let u = VertexSet::from_indices(g.n(), w.u)?;
    match DistinctWitness::new(&g, s, u) {
        Ok(ok) => {
            println!("{}", json!({"valid": true, "k": ok.k()}));
            Ok(())
        }
        Err(e) => {
            println!("{}", json!({"valid": false, "reason": e.to_string()}));
            Err(Rejected(e.to_string()).into())
        }
    }
}
