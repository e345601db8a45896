// SPDX-License-Identifier: Apache-2.0
//! The `report` command: savings of optimal plans over lot-for-lot.

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use pwlship::format::{Document, FileScalar, InstanceFile, Loaded};
use pwlship::lswrc::savings_decomposition;
use pwlship::solve::{solve_lot_sizing, SolveOptions};
use serde::Serialize;
use serde_json::Value;

use crate::input::{expand, load, sink, stem};
use crate::ReportArgs;

#[derive(Serialize)]
struct Row {
    instance: String,
    n: usize,
    qmax: f64,
    qmax_class: String,
    theta_class: String,
    delta_z: f64,
    production: f64,
    setup: f64,
    inventory: f64,
    /// `delta_z - (production - setup - inventory)`.
    residual: f64,
}

#[derive(Serialize)]
struct Cell {
    qmax_class: String,
    theta_class: String,
    count: usize,
    delta_z: f64,
    production: f64,
    setup: f64,
    inventory: f64,
}

fn meta_text(meta: Option<&Value>, key: &str) -> String {
    match meta.and_then(|m| m.get(key)) {
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
        None => String::new(),
    }
}

fn analyse<S: FileScalar>(name: String, file: &InstanceFile<S>, opts: &SolveOptions) -> Result<Option<Row>> {
    let Document::Lswrc(ls) = &file.document else {
        return Ok(None);
    };
    let solved = solve_lot_sizing(ls, opts)?;
    let s = savings_decomposition(ls, &solved.reduced.solution)?;
    let residual = s.total - (s.production - s.setup - s.inventory);
    let meta = file.meta.as_ref();
    let mut qmax_class = meta_text(meta, "qmax_class");
    if qmax_class.is_empty() {
        qmax_class = ls.qmax.to_value().to_string();
    }
    Ok(Some(Row {
        instance: name,
        n: ls.n,
        qmax: ls.qmax.to_f64(),
        qmax_class,
        theta_class: meta_text(meta, "theta_class"),
        delta_z: s.total.to_f64(),
        production: s.production.to_f64(),
        setup: s.setup.to_f64(),
        inventory: s.inventory.to_f64(),
        residual: residual.to_f64(),
    }))
}

fn class_rank(name: &str) -> usize {
    ["small", "medium", "large"].iter().position(|c| *c == name).unwrap_or(3)
}

fn cells(rows: &[Row]) -> Vec<Cell> {
    let mut groups: BTreeMap<(usize, String, usize, String), Vec<&Row>> = BTreeMap::new();
    for r in rows {
        let key = (class_rank(&r.qmax_class), r.qmax_class.clone(), class_rank(&r.theta_class), r.theta_class.clone());
        groups.entry(key).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((_, q, _, t), rs)| {
            let mean = |f: fn(&Row) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / rs.len() as f64;
            Cell {
                qmax_class: q,
                theta_class: t,
                count: rs.len(),
                delta_z: mean(|r| r.delta_z),
                production: mean(|r| r.production),
                setup: mean(|r| r.setup),
                inventory: mean(|r| r.inventory),
            }
        })
        .collect()
}

/// Mean savings by capacity in increasing order of capacity.
fn by_capacity(rows: &[Row]) -> Vec<(f64, f64)> {
    let mut groups: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for r in rows {
        let e = groups.entry(r.qmax.to_bits()).or_insert((0.0, 0));
        e.0 += r.delta_z;
        e.1 += 1;
    }
    let mut out: Vec<(f64, f64)> = groups.into_iter().map(|(q, (s, c))| (f64::from_bits(q), s / c as f64)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

pub fn run(args: &ReportArgs) -> Result<()> {
    let opts = SolveOptions {
        method: args.method,
        ..SolveOptions::default()
    };
    let mut rows = Vec::new();
    for path in expand(&args.inputs)? {
        let name = stem(&path);
        let row = match load(&path)? {
            Loaded::Exact(f) => analyse(name, &f, &opts),
            Loaded::Float(f) => analyse(name, &f, &opts),
        }
        .with_context(|| format!("while solving {}", path.display()))?;
        match row {
            Some(r) => rows.push(r),
            None => eprintln!("skipping {}: not a lot-sizing instance", path.display()),
        }
    }

    let mut table = csv::Writer::from_writer(sink(args.out.as_deref())?);
    if rows.is_empty() {
        table.write_record([
            "instance", "n", "qmax", "qmax_class", "theta_class", "delta_z", "production", "setup", "inventory",
            "residual",
        ])?;
    }
    for r in &rows {
        table.serialize(r)?;
    }
    table.flush()?;

    if let Some(path) = &args.plot {
        let mut plot = csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))?;
        let cells = cells(&rows);
        if cells.is_empty() {
            plot.write_record(["qmax_class", "theta_class", "count", "delta_z", "production", "setup", "inventory"])?;
        }
        for c in &cells {
            plot.serialize(c)?;
        }
        plot.flush()?;
    }

    let worst = rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    if worst > 1e-9 {
        eprintln!("warning: savings components miss the total by up to {worst:e}");
    }
    let caps = by_capacity(&rows);
    if let (Some(first), Some(last)) = (caps.first(), caps.last()) {
        if caps.len() > 1 && last.1 < first.1 {
            eprintln!(
                "warning: mean savings fall with capacity ({:.4} at {} vs {:.4} at {})",
                first.1, first.0, last.1, last.0
            );
        }
    }
    Ok(())
}
