// SPDX-License-Identifier: Apache-2.0
//! Dynamic programs over piecewise-linear value functions.
//!
//! `V_i(q)` is the cheapest way to leave node `i` with load `q`. Each stage
//! takes the envelope of the predecessor functions moved along their arcs and
//! superposes the node's transfer-cost function. [`solve_with_duration`] adds
//! a piecewise-constant duration axis.

mod budget;

pub use budget::{solve_with_duration, BudgetedValueFunction, BudgetedOutcome};

use crate::error::{Error, Result};
use crate::model::{Instance, Solution};
use crate::pwl::{envelope, superpose, PwlFunction, Tag, Transfer, NO_SOURCE};
use crate::scalar::Scalar;

/// Restrictions and switches shared by both dynamic programs.
#[derive(Clone, Debug)]
pub struct DpOptions<S> {
    /// Customers that must be visited.
    pub mandatory: Vec<usize>,
    /// Customers that must be skipped.
    pub excluded: Vec<usize>,
    /// Integerize every stage; `None` picks it from the data.
    pub integer_mode: Option<bool>,
    /// Require the vehicle to end empty.
    pub force_empty_end: bool,
    /// Price arc time at this rate on top of arc cost.
    pub lambda: Option<S>,
    /// Extra arc mask, indexed `[from][to]`.
    pub allowed_arcs: Option<Vec<Vec<bool>>>,
}

impl<S> Default for DpOptions<S> {
    fn default() -> Self {
        DpOptions {
            mandatory: Vec::new(),
            excluded: Vec::new(),
            integer_mode: None,
            force_empty_end: false,
            lambda: None,
            allowed_arcs: None,
        }
    }
}

impl<S: Scalar> DpOptions<S> {
    pub fn restricted(mandatory: Vec<usize>, excluded: Vec<usize>) -> Self {
        DpOptions {
            mandatory,
            excluded,
            ..Default::default()
        }
    }

    pub(crate) fn integer_mode_for(&self, inst: &Instance<S>) -> bool {
        self.integer_mode.unwrap_or_else(|| inst.is_integral())
    }
}

/// Load bookkeeping for runs of skipped nodes between two visits.
#[derive(Clone, Debug)]
pub(crate) struct SkipSpans<S> {
    load_prefix: Vec<S>,
    cost_prefix: Vec<S>,
    /// Admissible departure loads at `j` for a jump `j -> i`, indexed `[j][i]`.
    windows: Vec<Vec<Option<(S, S)>>>,
}

impl<S: Scalar> SkipSpans<S> {
    pub(crate) fn new(inst: &Instance<S>) -> Self {
        let n = inst.n;
        let prefix = |v: &[S]| -> Vec<S> {
            v.iter()
                .scan(S::zero(), |acc, &x| {
                    *acc = *acc + x;
                    Some(*acc)
                })
                .collect()
        };
        let load_prefix = prefix(&inst.skip_load);
        let cost_prefix = prefix(&inst.skip_cost);
        let mut windows = vec![vec![None; n]; n];
        for j in 0..n {
            let (mut lo, mut hi) = (S::zero(), inst.qmax);
            for i in j + 1..n {
                if hi < lo {
                    break;
                }
                windows[j][i] = Some((lo, hi));
                let run = load_prefix[i] - load_prefix[j];
                lo = lo.max_of(-run);
                hi = hi.min_of(inst.qmax - run);
            }
        }
        SkipSpans {
            load_prefix,
            cost_prefix,
            windows,
        }
    }

    /// Load added by the nodes strictly between `j` and `i`.
    #[inline]
    pub(crate) fn delta(&self, j: usize, i: usize) -> S {
        self.load_prefix[i - 1] - self.load_prefix[j]
    }

    #[inline]
    pub(crate) fn cost(&self, j: usize, i: usize) -> S {
        self.cost_prefix[i - 1] - self.cost_prefix[j]
    }

    #[inline]
    pub(crate) fn window(&self, j: usize, i: usize) -> Option<(S, S)> {
        self.windows[j][i]
    }
}

/// Node and arc restrictions resolved into lookup tables.
#[derive(Clone, Debug)]
pub(crate) struct ArcRules<S> {
    excluded: Vec<bool>,
    mandatory_prefix: Vec<usize>,
    mask: Option<Vec<Vec<bool>>>,
    lambda: Option<S>,
}

impl<S: Scalar> ArcRules<S> {
    pub(crate) fn new(inst: &Instance<S>, opts: &DpOptions<S>) -> Result<Self> {
        let n = inst.n;
        let mut excluded = vec![false; n];
        let mut mandatory = vec![false; n];
        for &e in &opts.excluded {
            if e == 0 || e >= n - 1 {
                return Err(Error::InvalidInstance(format!("node {e} cannot be excluded")));
            }
            excluded[e] = true;
        }
        for &m in &opts.mandatory {
            if m >= n {
                return Err(Error::InvalidInstance(format!("mandatory node {m} out of range")));
            }
            if excluded[m] {
                return Err(Error::InvalidInstance(format!("node {m} is both mandatory and excluded")));
            }
            mandatory[m] = true;
        }
        let mandatory_prefix = mandatory
            .iter()
            .scan(0usize, |acc, &m| {
                *acc += m as usize;
                Some(*acc)
            })
            .collect();
        Ok(ArcRules {
            excluded,
            mandatory_prefix,
            mask: opts.allowed_arcs.clone(),
            lambda: opts.lambda,
        })
    }

    pub(crate) fn is_excluded(&self, i: usize) -> bool {
        self.excluded[i]
    }

    /// `(weight, time)` of an arc that survives every restriction.
    pub(crate) fn arc(&self, inst: &Instance<S>, j: usize, i: usize) -> Option<(S, S)> {
        if self.excluded[j] || self.excluded[i] {
            return None;
        }
        if self.mandatory_prefix[i - 1] != self.mandatory_prefix[j] {
            return None;
        }
        if let Some(mask) = &self.mask {
            if !mask[j][i] {
                return None;
            }
        }
        let (c, t) = inst.arc(j, i)?;
        Some((self.lambda.map_or(c, |l| c + l * t), t))
    }
}

/// Value functions of a solve, one per node.
#[derive(Clone, Debug)]
pub struct ValueFunctionTable<S> {
    /// Value after the transfer at each node.
    pub v: Vec<PwlFunction<S>>,
    /// Value on arrival at each node, before its transfer.
    pub tilde: Vec<PwlFunction<S>>,
    pub integer_mode: bool,
    spans: SkipSpans<S>,
}

#[derive(Clone, Debug)]
pub struct DpOutcome<S> {
    pub table: ValueFunctionTable<S>,
    pub solution: Solution<S>,
    /// Optimal value of the (possibly multiplier-weighted) recurrence.
    pub value: S,
    /// Final load at the optimum.
    pub final_load: S,
}

/// First-node function: the transfer equals the departure load.
pub(crate) fn start_function<S: Scalar>(inst: &Instance<S>, integer: bool) -> PwlFunction<S> {
    let v0 = inst.profit[0].restrict(S::zero(), inst.qmax).map_tags(|_| Tag {
        source: NO_SOURCE,
        layer: 0,
        transfer: Transfer::FromLoad(S::zero()),
    });
    if integer {
        v0.integerize()
    } else {
        v0
    }
}

/// `V_j` moved along the arc `j -> i`: clipped to the admissible window,
/// translated by the skipped load and raised by the arc weight.
pub(crate) fn carry<S: Scalar>(
    vj: &PwlFunction<S>,
    spans: &SkipSpans<S>,
    j: usize,
    i: usize,
    weight: S,
    layer: u32,
) -> Option<PwlFunction<S>> {
    let (lo, hi) = spans.window(j, i)?;
    let g = vj.restrict(lo, hi);
    if g.is_empty() {
        return None;
    }
    let source = j as u32;
    Some(
        g.translate(spans.delta(j, i))
            .shift(weight + spans.cost(j, i))
            .map_tags(|t| Tag {
                source,
                layer,
                transfer: t.transfer,
            }),
    )
}

/// Transfer and clip one stage.
pub(crate) fn stage<S: Scalar>(
    inst: &Instance<S>,
    tilde: &PwlFunction<S>,
    i: usize,
    integer: bool,
) -> PwlFunction<S> {
    let v = superpose(tilde, &inst.profit[i]).restrict(S::zero(), inst.qmax);
    if integer {
        v.integerize()
    } else {
        v
    }
}

/// Minimum of the last-stage function, honoring `force_empty_end`.
pub(crate) fn final_minimum<S: Scalar>(last: &PwlFunction<S>, force_empty_end: bool) -> Option<(S, S)> {
    if force_empty_end {
        last.evaluate(S::zero()).map(|v| (S::zero(), v))
    } else {
        last.min_value()
    }
}

/// DP without duration limit.
pub fn solve_no_duration<S: Scalar>(inst: &Instance<S>, opts: &DpOptions<S>) -> Result<DpOutcome<S>> {
    let n = inst.n;
    let rules = ArcRules::new(inst, opts)?;
    let spans = SkipSpans::new(inst);
    let integer = opts.integer_mode_for(inst);
    let mut v: Vec<PwlFunction<S>> = Vec::with_capacity(n);
    let mut tilde: Vec<PwlFunction<S>> = Vec::with_capacity(n);
    let v0 = start_function(inst, integer);
    tilde.push(PwlFunction::empty());
    v.push(v0);
    for i in 1..n {
        if rules.is_excluded(i) {
            tilde.push(PwlFunction::empty());
            v.push(PwlFunction::empty());
            continue;
        }
        let moved: Vec<PwlFunction<S>> = (0..i)
            .filter(|&j| !v[j].is_empty())
            .filter_map(|j| {
                let (w, _) = rules.arc(inst, j, i)?;
                carry(&v[j], &spans, j, i, w, 0)
            })
            .collect();
        let t = if moved.is_empty() {
            PwlFunction::empty()
        } else {
            let t = envelope(&moved)?;
            if integer {
                t.integerize()
            } else {
                t
            }
        };
        let vi = if t.is_empty() {
            PwlFunction::empty()
        } else {
            stage(inst, &t, i, integer)
        };
        tilde.push(t);
        v.push(vi);
    }
    let (q, value) = final_minimum(&v[n - 1], opts.force_empty_end)
        .ok_or_else(|| Error::Infeasible("no feasible route reaches the last node".into()))?;
    let table = ValueFunctionTable {
        v,
        tilde,
        integer_mode: integer,
        spans,
    };
    let solution = backtrack(inst, &table, q)?;
    check_value(inst, &solution, value, opts.lambda)?;
    Ok(DpOutcome {
        table,
        solution,
        value,
        final_load: q,
    })
}

/// Reconstruct the route that attains `V_n(q)`.
pub fn backtrack<S: Scalar>(inst: &Instance<S>, table: &ValueFunctionTable<S>, q: S) -> Result<Solution<S>> {
    walk(inst, &table.spans, inst.n - 1, 0, q, |i, _| &table.v[i])
}

/// Follow segment tags from `(node, layer, q)` back to the first node.
pub(crate) fn walk<'a, S: Scalar>(
    inst: &Instance<S>,
    spans: &SkipSpans<S>,
    mut node: usize,
    mut layer: u32,
    mut q: S,
    lookup: impl Fn(usize, u32) -> &'a PwlFunction<S>,
) -> Result<Solution<S>> {
    let corrupt = |m: String| Error::Internal(format!("backtracking: {m}"));
    let mut visits = Vec::new();
    let mut ys = Vec::new();
    loop {
        let f = lookup(node, layer);
        let k = f
            .locate(q)
            .ok_or_else(|| corrupt(format!("load {q} outside the value function of node {node}")))?;
        let tag = f.segments()[k].tag;
        let y = tag
            .transfer
            .resolve(q)
            .ok_or_else(|| corrupt(format!("segment of node {node} has no transfer")))?;
        visits.push(node);
        ys.push(y);
        if tag.source == NO_SOURCE {
            if node != 0 || !(q - y).approx_eq(S::zero()) {
                return Err(corrupt(format!("route starts at node {node} with load {}", q - y)));
            }
            break;
        }
        let j = tag.source as usize;
        if j >= node {
            return Err(corrupt(format!("predecessor {j} of node {node} is not earlier")));
        }
        q = q - y - spans.delta(j, node);
        node = j;
        layer = tag.layer;
    }
    visits.reverse();
    ys.reverse();
    Solution::from_route(inst, visits, &ys)
}

/// Exact agreement for rationals; a loose relative check for floats.
pub(crate) fn close<S: Scalar>(a: S, b: S) -> bool {
    if S::EXACT {
        a == b
    } else {
        let (a, b) = (a.to_f64(), b.to_f64());
        (a - b).abs() <= 1e-6 * (1.0 + a.abs().max(b.abs()))
    }
}

pub(crate) fn check_value<S: Scalar>(
    inst: &Instance<S>,
    sol: &Solution<S>,
    value: S,
    lambda: Option<S>,
) -> Result<()> {
    let priced = sol.objective + lambda.map_or(S::zero(), |l| l * sol.duration);
    if close(priced, value) {
        Ok(())
    } else {
        let _ = inst;
        Err(Error::Internal(format!(
            "reconstructed route is worth {priced}, recurrence says {value}"
        )))
    }
}
