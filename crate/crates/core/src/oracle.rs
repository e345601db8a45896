// SPDX-License-Identifier: Apache-2.0
//! Exhaustive reference solvers for small instances.
//!
//! Every visit subsequence is enumerated, and for each one the transfers are
//! searched on a load grid with a plain table over grid loads. Nothing here
//! uses the piecewise-linear algebra beyond pointwise evaluation.

use crate::error::{Error, Result};
use crate::lswrc::{evaluate_plan, LotSizingInstance, Plan};
use crate::model::{Instance, Solution};
use crate::scalar::Scalar;

/// Largest node count accepted by [`brute_force`].
pub const MAX_NODES: usize = 12;

#[derive(Clone, Debug)]
pub struct OracleOptions<S> {
    pub respect_tmax: bool,
    /// Load grid spacing; required when the data is not integral.
    pub grid: Option<S>,
    pub force_empty_end: bool,
    pub mandatory: Vec<usize>,
    pub excluded: Vec<usize>,
}

impl<S: Scalar> OracleOptions<S> {
    pub fn new(respect_tmax: bool) -> Self {
        OracleOptions {
            respect_tmax,
            grid: None,
            force_empty_end: false,
            mandatory: Vec::new(),
            excluded: Vec::new(),
        }
    }
}

pub fn brute_force<S: Scalar>(inst: &Instance<S>, respect_tmax: bool) -> Result<Solution<S>> {
    brute_force_with(inst, &OracleOptions::new(respect_tmax))
}

/// Every index subsequence containing the first and last node, in order.
pub fn subsequences(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let inner = n.saturating_sub(2);
    (0u64..1 << inner).map(move |mask| {
        let mut v = vec![0];
        v.extend((0..inner).filter(|b| mask >> b & 1 == 1).map(|b| b + 1));
        v.push(n - 1);
        v
    })
}

pub fn brute_force_with<S: Scalar>(inst: &Instance<S>, opts: &OracleOptions<S>) -> Result<Solution<S>> {
    let n = inst.n;
    if n > MAX_NODES {
        return Err(Error::Unsupported(format!("brute force is limited to {MAX_NODES} nodes")));
    }
    let step = match opts.grid {
        Some(g) if g > S::zero() => g,
        Some(_) => return Err(Error::Unsupported("grid spacing must be positive".into())),
        None if inst.is_integral() => S::one(),
        None => return Err(Error::Unsupported("non-integral data needs an explicit grid".into())),
    };
    let slots = (inst.qmax / step).floor_tol().to_i64().expect("finite capacity") as usize;
    let mut best: Option<(S, Vec<usize>, Vec<S>)> = None;
    for visits in subsequences(n) {
        if opts.excluded.iter().any(|e| visits.contains(e)) || opts.mandatory.iter().any(|m| !visits.contains(m)) {
            continue;
        }
        let Some(travel) = inst.route_cost(&visits) else { continue };
        if opts.respect_tmax {
            let duration = inst.route_time(&visits).expect("arcs exist");
            if inst.tmax.is_some_and(|t| t.definitely_lt(duration)) {
                continue;
            }
        }
        let Some((cost, y)) = best_transfers(inst, &visits, step, slots, opts.force_empty_end) else {
            continue;
        };
        let total = travel + cost;
        let better = match &best {
            None => true,
            Some((b, bv, _)) => total.definitely_lt(*b) || (total.approx_eq(*b) && visits < *bv),
        };
        if better {
            best = Some((total, visits, y));
        }
    }
    let (_, visits, y) = best.ok_or_else(|| Error::Infeasible("no feasible subsequence".into()))?;
    Solution::from_route(inst, visits, &y)
}

/// Cheapest transfers along a fixed subsequence, loads restricted to `k * step`.
fn best_transfers<S: Scalar>(
    inst: &Instance<S>,
    visits: &[usize],
    step: S,
    slots: usize,
    force_empty_end: bool,
) -> Option<(S, Vec<S>)> {
    let n = inst.n;
    let mut visited = vec![false; n];
    for &i in visits {
        visited[i] = true;
    }
    let to_slot = |q: S| -> Option<usize> {
        let k = (q / step).to_i64()?;
        (0..=slots as i64).contains(&k).then_some(k as usize)
    };
    // cost[k]: best cost with load k*step after the current node; parent[i][k] = (prev slot, y).
    let mut cost: Vec<Option<S>> = vec![None; slots + 1];
    let mut parent: Vec<Vec<Option<(usize, S)>>> = Vec::with_capacity(n);
    let mut prev_cost: Vec<Option<S>> = vec![None; slots + 1];
    prev_cost[0] = Some(S::zero());
    for i in 0..n {
        let mut here: Vec<Option<(usize, S)>> = vec![None; slots + 1];
        cost.iter_mut().for_each(|c| *c = None);
        for (k, pc) in prev_cost.iter().enumerate() {
            let Some(pc) = *pc else { continue };
            let q = step * S::from_i64(k as i64);
            let options: Vec<(S, S)> = if visited[i] {
                let (a, b) = inst.profit[i].bounds().expect("non-empty");
                let lo = (a / step).ceil_tol().to_i64().expect("finite");
                let hi = (b / step).floor_tol().to_i64().expect("finite");
                (lo..=hi)
                    .filter_map(|m| {
                        let y = step * S::from_i64(m);
                        inst.profit[i].evaluate(y).map(|c| (y, c))
                    })
                    .collect()
            } else {
                vec![(inst.skip_load[i], inst.skip_cost[i])]
            };
            for (y, c) in options {
                let Some(k2) = to_slot(q + y) else { continue };
                let v = pc + c;
                if cost[k2].is_none_or(|old| v.definitely_lt(old)) {
                    cost[k2] = Some(v);
                    here[k2] = Some((k, y));
                }
            }
        }
        parent.push(here);
        std::mem::swap(&mut prev_cost, &mut cost);
    }
    let end = if force_empty_end {
        prev_cost[0].map(|v| (0, v))
    } else {
        prev_cost
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.map(|c| (k, c)))
            .fold(None, |acc: Option<(usize, S)>, (k, c)| match acc {
                Some((_, b)) if !c.definitely_lt(b) => acc,
                _ => Some((k, c)),
            })
    };
    let (mut k, total) = end?;
    let mut y = vec![S::zero(); n];
    for i in (0..n).rev() {
        let (pk, yi) = parent[i][k].expect("reachable");
        y[i] = yi;
        k = pk;
    }
    Some((total, y))
}

/// Exhaustive search over setup sets and integer production plans.
pub fn brute_force_lswrc<S: Scalar>(ls: &LotSizingInstance<S>) -> Result<Plan<S>> {
    let n = ls.n;
    if n > 10 {
        return Err(Error::Unsupported("lot-sizing brute force is limited to 10 periods".into()));
    }
    let integral = ls.qmax.is_integral()
        && ls.demand.iter().all(|d| d.is_integral())
        && ls.production.iter().all(|f| f.has_integer_borders());
    if !integral {
        return Err(Error::Unsupported("lot-sizing brute force needs integral data".into()));
    }
    let cap = ls.qmax.to_i64().expect("integral") as usize;
    let mut best: Option<Plan<S>> = None;
    for setups in subsequences(n) {
        let Some(plan) = best_plan(ls, &setups, cap) else { continue };
        let better = match &best {
            None => true,
            Some(b) => plan.total().definitely_lt(b.total()),
        };
        if better {
            best = Some(plan);
        }
    }
    best.ok_or_else(|| Error::Infeasible("no feasible production plan".into()))
}

/// Best integer production on fixed setup periods, by a table over end-of-period inventory.
fn best_plan<S: Scalar>(ls: &LotSizingInstance<S>, setups: &[usize], cap: usize) -> Option<Plan<S>> {
    let n = ls.n;
    let mut setup_time = S::zero();
    for w in setups.windows(2) {
        ls.setup_cost[w[0]][w[1]]?;
        setup_time = setup_time + ls.setup_time[w[0]][w[1]]?;
    }
    if ls.tmax.is_some_and(|t| t.definitely_lt(setup_time)) {
        return None;
    }
    let producing: Vec<bool> = (0..n).map(|i| setups.contains(&i)).collect();
    let mut table: Vec<Option<S>> = vec![None; cap + 1];
    table[0] = Some(S::zero());
    let mut choice: Vec<Vec<Option<(usize, i64)>>> = Vec::with_capacity(n);
    for i in 0..n {
        let d = ls.demand[i].to_i64().expect("integral");
        let amounts: Vec<(i64, S)> = if producing[i] {
            let (a, b) = ls.production[i].bounds().expect("non-empty");
            let (a, b) = (a.ceil_tol().to_i64().expect("finite"), b.floor_tol().to_i64().expect("finite"));
            (a..=b)
                .filter_map(|y| ls.production[i].evaluate(S::from_i64(y)).map(|c| (y, c)))
                .collect()
        } else {
            vec![(0, S::zero())]
        };
        let mut next: Vec<Option<S>> = vec![None; cap + 1];
        let mut pick: Vec<Option<(usize, i64)>> = vec![None; cap + 1];
        for (q, cur) in table.iter().enumerate() {
            let Some(cur) = *cur else { continue };
            for &(y, c) in &amounts {
                let q2 = q as i64 + y - d;
                if q2 < 0 || q2 > cap as i64 {
                    continue;
                }
                let v = cur + c + ls.holding[i] * S::from_i64(q2);
                let slot = &mut next[q2 as usize];
                if slot.is_none_or(|old| v.definitely_lt(old)) {
                    *slot = Some(v);
                    pick[q2 as usize] = Some((q, y));
                }
            }
        }
        table = next;
        choice.push(pick);
    }
    let (mut q, _) = table
        .iter()
        .enumerate()
        .filter_map(|(q, v)| v.map(|v| (q, v)))
        .fold(None, |acc: Option<(usize, S)>, (q, v)| match acc {
            Some((_, b)) if !v.definitely_lt(b) => acc,
            _ => Some((q, v)),
        })?;
    let mut production = vec![S::zero(); n];
    for i in (0..n).rev() {
        let (pq, y) = choice[i][q].expect("reachable");
        production[i] = S::from_i64(y);
        q = pq;
    }
    evaluate_plan(ls, setups, &production).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwl::{PwlFunction, Segment};
    use crate::scalar::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v as i128)
    }

    fn lin(slope: i64, lo: i64, hi: i64) -> PwlFunction<Rational> {
        PwlFunction::new(vec![Segment::new(r(slope), r(0), r(lo), r(hi))]).unwrap()
    }

    #[test]
    fn subsequences_keep_endpoints() {
        let all: Vec<_> = subsequences(4).collect();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|v| v[0] == 0 && *v.last().unwrap() == 3));
    }

    #[test]
    fn direct_trip_for_two_nodes() {
        let cost = vec![vec![None, Some(r(7))], vec![None, None]];
        let inst = Instance::with_time_equal_cost(cost, vec![lin(0, 0, 0); 2], r(3), None).unwrap();
        assert_eq!(brute_force(&inst, false).unwrap().objective, r(7));
    }

    #[test]
    fn three_node_pickup_and_drop() {
        let n = 3;
        let mut cost = vec![vec![None; n]; n];
        cost[0][1] = Some(r(1));
        cost[1][2] = Some(r(1));
        cost[0][2] = Some(r(1));
        let profit = vec![lin(0, 0, 1), lin(0, 0, 0), lin(2, -1, 0)];
        let inst = Instance::with_time_equal_cost(cost, profit, r(1), None).unwrap();
        let sol = brute_force(&inst, false).unwrap();
        assert_eq!(sol.objective, r(-1));
        assert_eq!(sol.visits, vec![0, 2]);
        assert_eq!(sol.y, vec![r(1), r(0), r(-1)]);
    }

    #[test]
    fn fractional_data_needs_a_grid() {
        let cost = vec![vec![None, Some(0.0)], vec![None, None]];
        let f = PwlFunction::new(vec![Segment::new(1.0, 0.0, 0.0, 0.5)]).unwrap();
        let inst = Instance::with_time_equal_cost(cost, vec![f.clone(), f], 1.0, None).unwrap();
        assert!(matches!(brute_force(&inst, false), Err(Error::Unsupported(_))));
        let opts = OracleOptions {
            grid: Some(0.5),
            ..OracleOptions::new(false)
        };
        assert_eq!(brute_force_with(&inst, &opts).unwrap().objective, 0.0);
    }
}
