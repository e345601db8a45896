// SPDX-License-Identifier: Apache-2.0
//! Duration-budgeted dynamic program.
//!
//! Each node keeps a list of `(threshold, U)` layers. `U` is the best value
//! over all routes reaching the node within `threshold` time units, so it
//! applies to every budget from its threshold up to the next one. Budgets are
//! exact sums of arc times; nothing is discretized.

use super::{carry, check_value, final_minimum, stage, walk, ArcRules, DpOptions, SkipSpans};
use crate::error::{Error, Result};
use crate::metric::min_time_route;
use crate::model::{Instance, Solution};
use crate::pwl::{envelope, PwlFunction};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct BudgetedValueFunction<S> {
    /// Per node, layers sorted by strictly increasing threshold.
    pub layers: Vec<Vec<(S, PwlFunction<S>)>>,
    pub integer_mode: bool,
    spans: SkipSpans<S>,
}

impl<S: Scalar> BudgetedValueFunction<S> {
    /// The layer in force at budget `t`.
    pub fn at_budget(&self, node: usize, t: S) -> Option<&PwlFunction<S>> {
        let layers = &self.layers[node];
        let k = layers.partition_point(|(th, _)| th.approx_le(t));
        k.checked_sub(1).map(|k| &layers[k].1)
    }

    pub fn evaluate(&self, node: usize, q: S, t: S) -> Option<S> {
        self.at_budget(node, t)?.evaluate(q)
    }
}

#[derive(Clone, Debug)]
pub struct BudgetedOutcome<S> {
    pub table: BudgetedValueFunction<S>,
    pub solution: Solution<S>,
    pub value: S,
    pub final_load: S,
}

/// Exact optimum under the duration limit; an absent limit means unlimited.
pub fn solve_with_duration<S: Scalar>(inst: &Instance<S>, opts: &DpOptions<S>) -> Result<BudgetedOutcome<S>> {
    let n = inst.n;
    let rules = ArcRules::new(inst, opts)?;
    let spans = SkipSpans::new(inst);
    let integer = opts.integer_mode_for(inst);
    let fits = |theta: S| inst.tmax.is_none_or(|tmax| theta.approx_le(tmax));

    if let Some(tmax) = inst.tmax {
        match min_time_route(inst, |j, i| rules.arc(inst, j, i).is_some()) {
            Some((t, _, _)) if t.approx_le(tmax) => {}
            Some((t, _, _)) => {
                return Err(Error::Infeasible(format!(
                    "fastest route takes {t}, more than the limit {tmax}"
                )))
            }
            None => return Err(Error::Infeasible("no route reaches the last node".into())),
        }
    }

    let mut layers: Vec<Vec<(S, PwlFunction<S>)>> = Vec::with_capacity(n);
    layers.push(vec![(S::zero(), super::start_function(inst, integer))]);
    for i in 1..n {
        if rules.is_excluded(i) {
            layers.push(Vec::new());
            continue;
        }
        let mut candidates: Vec<(S, PwlFunction<S>)> = Vec::new();
        for (j, lj) in layers.iter().enumerate() {
            let Some((w, t)) = rules.arc(inst, j, i) else { continue };
            for (k, (th, u)) in lj.iter().enumerate() {
                let theta = *th + t;
                if !fits(theta) {
                    break;
                }
                if let Some(g) = carry(u, &spans, j, i, w, k as u32) {
                    candidates.push((theta, g));
                }
            }
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut out: Vec<(S, PwlFunction<S>)> = Vec::new();
        let mut start = 0;
        while start < candidates.len() {
            let theta = candidates[start].0;
            let mut end = start + 1;
            while end < candidates.len() && candidates[end].0.approx_eq(theta) {
                end += 1;
            }
            let group: Vec<PwlFunction<S>> = candidates[start..end].iter().map(|c| c.1.clone()).collect();
            start = end;

            let mut arrival = envelope(&group)?;
            if integer {
                arrival = arrival.integerize();
            }
            let fresh = stage(inst, &arrival, i, integer);
            if fresh.is_empty() {
                continue;
            }
            let merged = match out.last() {
                None => fresh,
                Some((_, prev)) if prev.dominates(&fresh) => continue,
                Some((_, prev)) => {
                    let m = envelope(&[prev.clone(), fresh])?;
                    if integer {
                        m.integerize()
                    } else {
                        m
                    }
                }
            };
            out.push((theta, merged));
        }
        layers.push(out);
    }

    let last = layers[n - 1]
        .last()
        .ok_or_else(|| Error::Infeasible("no route reaches the last node within the limit".into()))?;
    let last_layer = (layers[n - 1].len() - 1) as u32;
    let (q, value) = final_minimum(&last.1, opts.force_empty_end)
        .ok_or_else(|| Error::Infeasible("the last node cannot end empty".into()))?;
    let table = BudgetedValueFunction {
        layers,
        integer_mode: integer,
        spans,
    };
    let solution = walk(inst, &table.spans, n - 1, last_layer, q, |i, k| &table.layers[i][k as usize].1)?;
    check_value(inst, &solution, value, opts.lambda)?;
    if let Some(tmax) = inst.tmax {
        if tmax.definitely_lt(solution.duration) {
            return Err(Error::Internal(format!(
                "reconstructed route takes {} beyond the limit {tmax}",
                solution.duration
            )));
        }
    }
    Ok(BudgetedOutcome {
        table,
        solution,
        value,
        final_load: q,
    })
}
