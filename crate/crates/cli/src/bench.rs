// SPDX-License-Identifier: Apache-2.0
//! The `bench` command.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use pwlship::format::{Document, FileScalar, InstanceFile, Loaded};
use pwlship::solve::{solve, solve_lot_sizing, Method, SolveOptions, Solved};
use pwlship::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::input::{expand, load, sink, stem};
use crate::BenchArgs;

/// One CSV row. Objectives and bounds are in the route-evaluation form, lot-sizing files included.
#[derive(Serialize)]
struct Row {
    instance: String,
    method: String,
    objective: Option<f64>,
    dual_bound: Option<f64>,
    wall_ms: f64,
    nodes: Option<usize>,
    status: String,
}

fn run_one<S: FileScalar>(file: &InstanceFile<S>, opts: &SolveOptions) -> pwlship::Result<Solved<S>> {
    match &file.document {
        Document::Areltp(inst) => solve(inst, opts),
        Document::Lswrc(ls) => solve_lot_sizing(ls, opts).map(|s| s.reduced),
    }
}

fn row<S: FileScalar>(name: &str, method: Method, result: pwlship::Result<Solved<S>>, wall_ms: f64) -> Row {
    let mut row = Row {
        instance: name.to_string(),
        method: method.name().to_string(),
        objective: None,
        dual_bound: None,
        wall_ms,
        nodes: None,
        status: "ok".into(),
    };
    match result {
        Ok(s) => {
            row.method = s.method.name().to_string();
            row.objective = Some(s.solution.objective.to_f64());
            row.dual_bound = s.dual_bound.map(|b| b.to_f64());
            row.nodes = s.nodes;
        }
        Err(Error::Infeasible(_)) => row.status = "infeasible".into(),
        Err(e) => row.status = format!("error: {e}"),
    }
    row
}

fn bench_one(path: &PathBuf, loaded: &Result<Loaded, String>, method: Method, seed: u64) -> Row {
    let name = stem(path);
    let opts = SolveOptions {
        method,
        seed,
        ..SolveOptions::default()
    };
    let start = Instant::now();
    let elapsed = |start: Instant| start.elapsed().as_secs_f64() * 1e3;
    match loaded {
        Ok(Loaded::Exact(f)) => {
            let r = run_one(f, &opts);
            row(&name, method, r, elapsed(start))
        }
        Ok(Loaded::Float(f)) => {
            let r = run_one(f, &opts);
            row(&name, method, r, elapsed(start))
        }
        Err(msg) => Row {
            instance: name,
            method: method.name().to_string(),
            objective: None,
            dual_bound: None,
            wall_ms: 0.0,
            nodes: None,
            status: format!("error: {msg}"),
        },
    }
}

fn pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("PWLSHIP_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("PWLSHIP_THREADS={v:?} is not a count"))?;
        builder = builder.num_threads(n);
    }
    builder.build().context("cannot start worker threads")
}

pub fn run(args: &BenchArgs) -> Result<()> {
    let files = expand(&args.inputs)?;
    let loaded: Vec<Result<Loaded, String>> =
        files.iter().map(|p| load(p).map_err(|e| format!("{e:#}"))).collect();
    let jobs: Vec<(usize, Method)> = (0..files.len())
        .flat_map(|i| args.methods.iter().map(move |&m| (i, m)))
        .collect();
    let rows: Vec<Row> = pool()?.install(|| {
        jobs.par_iter()
            .map(|&(i, m)| bench_one(&files[i], &loaded[i], m, args.seed))
            .collect()
    });
    let mut out = csv::Writer::from_writer(sink(args.out.as_deref())?);
    if rows.is_empty() {
        out.write_record(["instance", "method", "objective", "dual_bound", "wall_ms", "nodes", "status"])?;
    }
    for r in &rows {
        out.serialize(r)?;
    }
    out.flush()?;
    let failed = rows.iter().filter(|r| r.status.starts_with("error")).count();
    if failed > 0 {
        eprintln!("{failed} of {} runs failed", rows.len());
    }
    Ok(())
}
