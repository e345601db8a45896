// SPDX-License-Identifier: Apache-2.0
//! The `solve` and `export` commands.

use std::time::Instant;

use anyhow::Result;
use pwlship::format::{pretty, solution_value, Document, FileScalar, InstanceFile, Loaded, SolveReport};
use pwlship::lswrc::{reduce_to_areltp, Plan};
use pwlship::mipexport::export as export_lp;
use pwlship::solve::{solve as solve_instance, solve_lot_sizing, SolveOptions, Solved};
use pwlship::Error;
use serde_json::{json, Value};

use crate::input::{emit, load};
use crate::{ExportArgs, Outcome, SolveArgs, Switch};

pub fn options(args: &SolveArgs) -> SolveOptions {
    SolveOptions {
        method: args.method,
        seed: args.seed,
        integer_mode: args.integer_mode.map(|s| matches!(s, Switch::On)),
        force_empty_end: args.force_empty_end,
    }
}

fn report<S: Copy>(solved: &Solved<S>) -> SolveReport<S> {
    SolveReport {
        method: solved.method.name().to_string(),
        dual_bound: solved.dual_bound,
        nodes_expanded: solved.nodes,
    }
}

fn values<S: FileScalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(|x| x.to_value()).collect())
}

fn plan_value<S: FileScalar>(plan: &Plan<S>) -> Value {
    json!({
        "setups": plan.setups,
        "production": values(&plan.production),
        "inventory": values(&plan.inventory),
        "setup_cost": plan.setup_cost.to_value(),
        "production_cost": plan.production_cost.to_value(),
        "holding_cost": plan.holding_cost.to_value(),
        "setup_time": plan.setup_time.to_value(),
        "total": plan.total().to_value(),
    })
}

/// Solution document for one file, plus a one-line summary.
pub fn solve_file<S: FileScalar>(file: &InstanceFile<S>, opts: &SolveOptions) -> pwlship::Result<(Value, String)> {
    let start = Instant::now();
    let (mut value, solved_method, objective, extra) = match &file.document {
        Document::Areltp(inst) => {
            let solved = solve_instance(inst, opts)?;
            let value = solution_value(&solved.solution, &report(&solved));
            (value, solved.method, solved.solution.objective, None)
        }
        Document::Lswrc(ls) => {
            let out = solve_lot_sizing(ls, opts)?;
            let mut value = solution_value(&out.reduced.solution, &report(&out.reduced));
            value["plan"] = plan_value(&out.plan);
            let total = out.plan.total().to_value();
            (value, out.reduced.method, out.reduced.solution.objective, Some(total))
        }
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    value["wall_ms"] = json!(ms);
    let mut summary = format!("method {solved_method}  objective {}", objective.to_value());
    if let Some(total) = extra {
        summary.push_str(&format!("  plan cost {total}"));
    }
    summary.push_str(&format!("  {ms:.1} ms"));
    Ok((value, summary))
}

pub fn run(args: &SolveArgs) -> Result<Outcome> {
    let loaded = load(&args.input)?;
    let opts = options(args);
    let result = match &loaded {
        Loaded::Exact(f) => solve_file(f, &opts),
        Loaded::Float(f) => solve_file(f, &opts),
    };
    match result {
        Ok((value, summary)) => {
            emit(args.out.as_deref(), &pretty(&value))?;
            if args.out.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            Ok(Outcome::Done)
        }
        Err(Error::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            Ok(Outcome::Infeasible)
        }
        Err(e) => Err(e.into()),
    }
}

fn export_file<S: FileScalar>(file: &InstanceFile<S>, args: &ExportArgs) -> Result<String> {
    Ok(match &file.document {
        Document::Areltp(inst) => export_lp(inst, args.variant)?,
        Document::Lswrc(ls) => export_lp(&reduce_to_areltp(ls)?.0, args.variant)?,
    })
}

pub fn export(args: &ExportArgs) -> Result<()> {
    let text = match &load(&args.input)? {
        Loaded::Exact(f) => export_file(f, args)?,
        Loaded::Float(f) => export_file(f, args)?,
    };
    emit(args.out.as_deref(), &text)
}
