// SPDX-License-Identifier: Apache-2.0
//! Branch-and-bound over customer inclusion and exclusion.
//!
//! A node fixes a set of mandatory customers `S` and excluded customers `T`.
//! Its lower bound is the Lagrangian dual of the restricted problem. Its
//! upper bound comes from the dual's feasible primal, grown by inserting
//! further customers while the duration limit allows, and then re-optimized
//! over the grown tour. Nodes are explored lowest upper bound first.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dp::{solve_no_duration, DpOptions};
use crate::error::{Error, Result};
use crate::lagrangian::{solve_dual_until, DualOutcome, DualTolerances};
use crate::model::{Instance, Solution};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct BranchNode<S> {
    pub mandatory: Vec<usize>,
    pub excluded: Vec<usize>,
    pub lower_bound: S,
    pub upper_bound: S,
    pub ub_solution: Solution<S>,
    /// Dual primal plus every customer that fits, in route order.
    pub augmented_tour: Vec<usize>,
    /// The upper bound is optimal for this node.
    pub solved: bool,
}

#[derive(Clone, Debug)]
pub struct BnbOptions<S> {
    pub seed: u64,
    pub integer_mode: Option<bool>,
    pub force_empty_end: bool,
    pub tolerances: DualTolerances<S>,
    /// Stop with an error after evaluating this many nodes.
    pub node_limit: Option<usize>,
}

impl<S: Scalar> Default for BnbOptions<S> {
    fn default() -> Self {
        BnbOptions {
            seed: 0,
            integer_mode: None,
            force_empty_end: false,
            tolerances: DualTolerances::default(),
            node_limit: None,
        }
    }
}

impl<S: Scalar> BnbOptions<S> {
    fn restrictions(&self, mandatory: &[usize], excluded: &[usize]) -> DpOptions<S> {
        DpOptions {
            mandatory: mandatory.to_vec(),
            excluded: excluded.to_vec(),
            integer_mode: self.integer_mode,
            force_empty_end: self.force_empty_end,
            lambda: None,
            allowed_arcs: None,
        }
    }
}

/// Bounds for a node; `None` when its restricted problem is infeasible.
pub fn node_bounds<S: Scalar>(
    inst: &Instance<S>,
    mandatory: &[usize],
    excluded: &[usize],
    opts: &BnbOptions<S>,
) -> Result<Option<BranchNode<S>>> {
    match evaluate_node(inst, mandatory, excluded, opts, |_| false)? {
        NodeEvaluation::Bounded(node) => Ok(Some(node)),
        NodeEvaluation::Infeasible => Ok(None),
        NodeEvaluation::Pruned { .. } => unreachable!("no pruning rule given"),
    }
}

#[derive(Clone, Debug)]
pub enum NodeEvaluation<S> {
    Infeasible,
    /// A dual value met the pruning rule before the bounds were complete.
    Pruned { lower_bound: S },
    Bounded(BranchNode<S>),
}

/// [`node_bounds`] that gives up on the node once `prune(L(λ))` holds.
pub fn evaluate_node<S: Scalar>(
    inst: &Instance<S>,
    mandatory: &[usize],
    excluded: &[usize],
    opts: &BnbOptions<S>,
    prune: impl Fn(S) -> bool,
) -> Result<NodeEvaluation<S>> {
    let tmax = inst
        .tmax
        .ok_or_else(|| Error::InvalidInstance("branch-and-bound needs a duration limit".into()))?;
    let restrictions = opts.restrictions(mandatory, excluded);
    let dual = match solve_dual_until(inst, &restrictions, opts.tolerances, prune) {
        Ok(DualOutcome::Finished(d)) => d,
        Ok(DualOutcome::Cutoff(e)) => return Ok(NodeEvaluation::Pruned { lower_bound: e.value }),
        Err(Error::Infeasible(_)) => return Ok(NodeEvaluation::Infeasible),
        Err(e) => return Err(e),
    };
    let primal = dual.feasible.clone();
    let tour = augment(inst, &primal.visits, excluded, tmax);

    let outside: Vec<usize> = (1..inst.n - 1).filter(|i| !tour.contains(i)).collect();
    let over_tour = DpOptions {
        excluded: outside.clone(),
        ..restrictions.clone()
    };
    let mask = subpath_mask(inst, &tour);
    let mut best = primal;
    let mut solved = false;

    let free = match solve_no_duration(inst, &over_tour) {
        Ok(out) => Some(out.solution),
        Err(Error::Infeasible(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(free) = &free {
        if free.duration.approx_le(tmax) {
            if free.objective < best.objective {
                best = free.clone();
            }
            // Cheapest route over the tour, and it fits: nothing else in the node is left.
            solved = outside.iter().all(|i| excluded.contains(i));
        }
    }
    if !solved {
        let filtered = DpOptions {
            allowed_arcs: Some(mask),
            ..over_tour
        };
        match solve_no_duration(inst, &filtered) {
            Ok(out) if out.solution.objective < best.objective && out.solution.duration.approx_le(tmax) => {
                best = out.solution;
            }
            Ok(_) | Err(Error::Infeasible(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(NodeEvaluation::Bounded(BranchNode {
        mandatory: mandatory.to_vec(),
        excluded: excluded.to_vec(),
        lower_bound: dual.lower_bound(),
        upper_bound: best.objective,
        ub_solution: best,
        augmented_tour: tour,
        solved,
    }))
}

/// Insert absent customers at their route position, in index order, while the limit holds.
fn augment<S: Scalar>(inst: &Instance<S>, visits: &[usize], excluded: &[usize], tmax: S) -> Vec<usize> {
    let mut tour = visits.to_vec();
    let mut duration = inst.route_time(&tour).expect("feasible primal");
    for i in 1..inst.n - 1 {
        if excluded.contains(&i) || tour.contains(&i) {
            continue;
        }
        let pos = tour.partition_point(|&v| v < i);
        let (a, b) = (tour[pos - 1], tour[pos]);
        let (Some((_, tai)), Some((_, tib)), Some((_, tab))) = (inst.arc(a, i), inst.arc(i, b), inst.arc(a, b)) else {
            continue;
        };
        let next = duration - tab + tai + tib;
        if next.approx_le(tmax) {
            tour.insert(pos, i);
            duration = next;
        }
    }
    tour
}

/// Arcs between tour nodes no slower than the tour itself between them.
fn subpath_mask<S: Scalar>(inst: &Instance<S>, tour: &[usize]) -> Vec<Vec<bool>> {
    let n = inst.n;
    let mut mask = vec![vec![false; n]; n];
    for (x, &a) in tour.iter().enumerate() {
        let mut along = S::zero();
        for w in tour[x..].windows(2) {
            along = along + inst.arc(w[0], w[1]).expect("tour arcs exist").1;
            let b = w[1];
            if let Some((_, t)) = inst.arc(a, b) {
                mask[a][b] = t.approx_le(along);
            }
        }
    }
    mask
}

/// Outcome of [`branch`].
#[derive(Clone, Debug, PartialEq)]
pub enum Branching {
    Solved,
    Children {
        customer: usize,
        include: (Vec<usize>, Vec<usize>),
        exclude: (Vec<usize>, Vec<usize>),
    },
}

/// Split a node on a random undecided customer.
///
/// Customers outside the augmented tour are preferred. When every such
/// customer is decided but the node is not proven solved, an undecided tour
/// customer is used instead.
pub fn branch<S: Scalar, R: Rng>(inst: &Instance<S>, node: &BranchNode<S>, rng: &mut R) -> Branching {
    if node.solved {
        return Branching::Solved;
    }
    let undecided = |i: &usize| !node.mandatory.contains(i) && !node.excluded.contains(i);
    let mut candidates: Vec<usize> = (1..inst.n - 1)
        .filter(|i| !node.augmented_tour.contains(i))
        .filter(undecided)
        .collect();
    if candidates.is_empty() {
        candidates = node.augmented_tour.iter().copied().filter(|&i| i != 0 && i != inst.n - 1).filter(undecided).collect();
    }
    if candidates.is_empty() {
        return Branching::Solved;
    }
    let customer = candidates[rng.gen_range(0..candidates.len())];
    let mut with = node.mandatory.clone();
    with.push(customer);
    with.sort_unstable();
    let mut without = node.excluded.clone();
    without.push(customer);
    without.sort_unstable();
    Branching::Children {
        customer,
        include: (with, node.excluded.clone()),
        exclude: (node.mandatory.clone(), without),
    }
}

#[derive(Clone, Debug)]
pub struct BnbOutcome<S> {
    pub solution: Solution<S>,
    /// Dual bound at the root.
    pub root_lower_bound: S,
    /// Nodes whose bounds were computed.
    pub nodes: usize,
    /// Incumbent objective after each improvement.
    pub incumbent_history: Vec<S>,
}

struct Queued<S> {
    ub: S,
    lb: S,
    seq: usize,
    node: BranchNode<S>,
}

impl<S: Scalar> PartialEq for Queued<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Queued<S> {}

impl<S: Scalar> PartialOrd for Queued<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Queued<S> {
    /// Reversed so that the max-heap pops the lowest upper bound, then the lowest lower bound, then the oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .ub
            .total_cmp(&self.ub)
            .then(other.lb.total_cmp(&self.lb))
            .then(other.seq.cmp(&self.seq))
    }
}

/// True when every route's objective is an integer, which allows rounding bounds up.
fn integral_objective<S: Scalar>(inst: &Instance<S>) -> bool {
    let arcs = inst.cost.iter().flatten().flatten().all(|c| c.is_integral());
    let funcs = inst
        .profit
        .iter()
        .all(|f| f.segments().iter().all(|s| s.slope.is_integral() && s.intercept.is_integral()));
    S::EXACT && arcs && funcs && inst.is_integral() && inst.skip_cost.iter().all(|k| k.is_integral())
}

pub fn solve_bbdp<S: Scalar>(inst: &Instance<S>, opts: &BnbOptions<S>) -> Result<BnbOutcome<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let round_up = integral_objective(inst) && opts.integer_mode != Some(false);
    let bound = |lb: S| if round_up { lb.ceil() } else { lb };
    let prunes = |lb: S, inc: S| {
        let lb = bound(lb);
        lb >= inc || lb.approx_eq(inc)
    };

    let root = node_bounds(inst, &[], &[], opts)?
        .ok_or_else(|| Error::Infeasible("the duration limit admits no route".into()))?;
    let root_lower_bound = root.lower_bound;
    let mut nodes = 1;
    let mut incumbent = root.ub_solution.clone();
    let mut history = vec![incumbent.objective];
    let mut heap = BinaryHeap::new();
    let mut seq = 0;
    heap.push(Queued {
        ub: root.upper_bound,
        lb: root.lower_bound,
        seq,
        node: root,
    });

    while let Some(Queued { node, .. }) = heap.pop() {
        if prunes(node.lower_bound, incumbent.objective) {
            continue;
        }
        let Branching::Children { include, exclude, .. } = branch(inst, &node, &mut rng) else {
            continue;
        };
        for (mandatory, excluded) in [include, exclude] {
            if opts.node_limit.is_some_and(|limit| nodes >= limit) {
                return Err(Error::Internal(format!("node limit of {nodes} reached")));
            }
            nodes += 1;
            let inc = incumbent.objective;
            let child = match evaluate_node(inst, &mandatory, &excluded, opts, |lb| prunes(lb, inc))? {
                NodeEvaluation::Bounded(child) => child,
                NodeEvaluation::Infeasible | NodeEvaluation::Pruned { .. } => continue,
            };
            if child.upper_bound < incumbent.objective {
                incumbent = child.ub_solution.clone();
                history.push(incumbent.objective);
            }
            if child.solved || prunes(child.lower_bound, incumbent.objective) {
                continue;
            }
            seq += 1;
            heap.push(Queued {
                ub: child.upper_bound,
                lb: child.lower_bound,
                seq,
                node: child,
            });
        }
    }
    Ok(BnbOutcome {
        solution: incumbent,
        root_lower_bound,
        nodes,
        incumbent_history: history,
    })
}
