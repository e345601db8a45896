// SPDX-License-Identifier: Apache-2.0
//! Lagrangian relaxation of the duration limit.
//!
//! Pricing arc time at `λ` turns the constrained problem into the
//! unconstrained one with weights `c + λ t`, solved by the plain dynamic
//! program. `L(λ) = min_x ψ(x) - λ s(x)` with slack `s(x) = T_max - t(x)` is
//! concave, and its maximum is a lower bound on the constrained optimum.

use crate::dp::{solve_no_duration, DpOptions};
use crate::error::{Error, Result};
use crate::pwl::{PwlFunction, Segment};
use crate::model::{Instance, Solution};
use crate::scalar::Scalar;

/// Upper multiplier used when the fastest route exactly exhausts the limit.
pub const LAMBDA_CAP: i64 = 1_000_000;

/// Iteration guard for the multiplier search.
const MAX_ITERATIONS: usize = 200;

#[derive(Clone, Debug)]
pub struct DualEvaluation<S> {
    pub lambda: S,
    pub value: S,
    pub primal: Solution<S>,
    pub slack: S,
}

impl<S: Scalar> DualEvaluation<S> {
    pub fn is_feasible(&self) -> bool {
        self.slack >= S::zero() || self.slack.approx_eq(S::zero())
    }
}

fn tmax_of<S: Scalar>(inst: &Instance<S>) -> Result<S> {
    inst.tmax
        .ok_or_else(|| Error::InvalidInstance("the relaxation needs a duration limit".into()))
}

/// `L(λ)` with the optimal relaxed route.
pub fn evaluate_dual<S: Scalar>(inst: &Instance<S>, lambda: S, restrictions: &DpOptions<S>) -> Result<DualEvaluation<S>> {
    let tmax = tmax_of(inst)?;
    if lambda < S::zero() {
        return Err(Error::InvalidInstance(format!("negative multiplier {lambda}")));
    }
    let opts = DpOptions {
        lambda: Some(lambda),
        ..restrictions.clone()
    };
    let out = solve_no_duration(inst, &opts)?;
    let slack = tmax - out.solution.duration;
    Ok(DualEvaluation {
        lambda,
        value: out.value - lambda * tmax,
        primal: out.solution,
        slack,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaInterval<S> {
    pub lo: S,
    pub hi: S,
    /// True when the fastest route has zero slack and `hi` is [`LAMBDA_CAP`].
    pub capped: bool,
}

/// Interval certain to contain a maximizer of `L`.
pub fn initial_interval<S: Scalar>(inst: &Instance<S>, restrictions: &DpOptions<S>) -> Result<LambdaInterval<S>> {
    let root = evaluate_dual(inst, S::zero(), restrictions)?;
    interval_from_root(inst, restrictions, &root)
}

fn interval_from_root<S: Scalar>(
    inst: &Instance<S>,
    restrictions: &DpOptions<S>,
    root: &DualEvaluation<S>,
) -> Result<LambdaInterval<S>> {
    let tmax = tmax_of(inst)?;
    if root.is_feasible() {
        return Ok(LambdaInterval {
            lo: S::zero(),
            hi: S::zero(),
            capped: false,
        });
    }
    let capped = LambdaInterval {
        lo: S::zero(),
        hi: S::from_i64(LAMBDA_CAP),
        capped: true,
    };
    let (t_fast, visits) = fastest(inst, restrictions)?;
    if !t_fast.definitely_lt(tmax) {
        return Ok(capped);
    }
    // Best objective along the fastest route bounds every L(λ) from above.
    let excluded: Vec<usize> = (1..inst.n - 1).filter(|i| !visits.contains(i)).collect();
    let along = DpOptions {
        excluded,
        allowed_arcs: None,
        lambda: None,
        ..restrictions.clone()
    };
    let psi = match solve_no_duration(inst, &along) {
        Ok(out) => out.solution.objective,
        Err(Error::Infeasible(_)) => return Ok(capped),
        Err(e) => return Err(e),
    };
    let hi = (psi - root.value) / (tmax - t_fast);
    Ok(LambdaInterval {
        lo: S::zero(),
        hi: hi.max_of(S::zero()),
        capped: false,
    })
}

/// Fastest admissible route that also respects the load bounds; infeasible
/// when even it exceeds the limit.
fn fastest<S: Scalar>(inst: &Instance<S>, restrictions: &DpOptions<S>) -> Result<(S, Vec<usize>)> {
    let tmax = tmax_of(inst)?;
    let flat = |f: &PwlFunction<S>| {
        PwlFunction::new(
            f.segments()
                .iter()
                .map(|s| Segment::new(S::zero(), S::zero(), s.lo, s.hi))
                .collect(),
        )
    };
    let timed = Instance {
        cost: inst.time.clone(),
        profit: inst.profit.iter().map(flat).collect::<Result<_>>()?,
        skip_cost: vec![S::zero(); inst.n],
        ..inst.clone()
    };
    let opts = DpOptions {
        lambda: None,
        ..restrictions.clone()
    };
    let route = match solve_no_duration(&timed, &opts) {
        Ok(out) => out.solution,
        Err(Error::Infeasible(_)) => return Err(Error::Infeasible("no route reaches the last node".into())),
        Err(e) => return Err(e),
    };
    let t = route.duration;
    if tmax.definitely_lt(t) {
        return Err(Error::Infeasible(format!(
            "even the fastest route takes {t}, more than the limit {tmax}"
        )));
    }
    Ok((t, route.visits))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The unpriced optimum already meets the limit.
    RootFeasible,
    /// A feasible primal with `λ s ≤ ε_cs` was found.
    ComplementarySlackness,
    /// The multiplier bracket is narrower than `ε`.
    BracketClosed,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct DualSolution<S> {
    /// Evaluation with the greatest `L`.
    pub best: DualEvaluation<S>,
    /// Feasible primal at the upper bracket end.
    pub feasible: Solution<S>,
    pub bracket: (S, S),
    pub termination: Termination,
    /// Every evaluation in the order performed.
    pub evaluations: Vec<DualEvaluation<S>>,
    pub interval: LambdaInterval<S>,
}

impl<S: Scalar> DualSolution<S> {
    pub fn lower_bound(&self) -> S {
        self.best.value
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DualTolerances<S> {
    /// Bracket width at which the search stops; `None` means `1e-6 (1 + |L(0)|)`.
    pub eps: Option<S>,
    pub eps_cs: S,
}

impl<S: Scalar> Default for DualTolerances<S> {
    fn default() -> Self {
        DualTolerances {
            eps: None,
            eps_cs: S::from_f64_lossy(1e-6),
        }
    }
}

struct Search<'a, S> {
    inst: &'a Instance<S>,
    restrictions: &'a DpOptions<S>,
    log: Vec<DualEvaluation<S>>,
    best: usize,
    stop: &'a dyn Fn(S) -> bool,
}

impl<S: Scalar> Search<'_, S> {
    fn eval(&mut self, lambda: S) -> std::result::Result<DualEvaluation<S>, Halt<S>> {
        let e = evaluate_dual(self.inst, lambda, self.restrictions)?;
        if (self.stop)(e.value) {
            return Err(Halt::Cutoff(e));
        }
        if self.log.is_empty() || self.log[self.best].value < e.value {
            self.best = self.log.len();
        }
        self.log.push(e.clone());
        Ok(e)
    }
}

/// Maximize `L` by intersecting tangent lines of a feasible/infeasible bracket.
pub fn solve_dual<S: Scalar>(
    inst: &Instance<S>,
    restrictions: &DpOptions<S>,
    tol: DualTolerances<S>,
) -> Result<DualSolution<S>> {
    match solve_dual_until(inst, restrictions, tol, |_| false)? {
        DualOutcome::Finished(d) => Ok(d),
        DualOutcome::Cutoff(_) => unreachable!("no cutoff requested"),
    }
}

/// Result of [`solve_dual_until`].
#[derive(Clone, Debug)]
pub enum DualOutcome<S> {
    Finished(DualSolution<S>),
    /// An evaluation whose `L(λ)` met the stopping rule.
    Cutoff(DualEvaluation<S>),
}

enum Halt<S> {
    Failed(Error),
    Cutoff(DualEvaluation<S>),
}

impl<S> From<Error> for Halt<S> {
    fn from(e: Error) -> Self {
        Halt::Failed(e)
    }
}

/// [`solve_dual`] that stops as soon as `stop(L(λ))` holds for some evaluated multiplier.
pub fn solve_dual_until<S: Scalar>(
    inst: &Instance<S>,
    restrictions: &DpOptions<S>,
    tol: DualTolerances<S>,
    stop: impl Fn(S) -> bool,
) -> Result<DualOutcome<S>> {
    match search_dual(inst, restrictions, tol, &stop) {
        Ok(d) => Ok(DualOutcome::Finished(d)),
        Err(Halt::Cutoff(e)) => Ok(DualOutcome::Cutoff(e)),
        Err(Halt::Failed(e)) => Err(e),
    }
}

fn search_dual<S: Scalar>(
    inst: &Instance<S>,
    restrictions: &DpOptions<S>,
    tol: DualTolerances<S>,
    stop: &dyn Fn(S) -> bool,
) -> std::result::Result<DualSolution<S>, Halt<S>> {
    let mut search = Search {
        inst,
        restrictions,
        log: Vec::new(),
        best: 0,
        stop,
    };
    let root = search.eval(S::zero())?;
    let finish = |search: Search<S>, hi: &DualEvaluation<S>, lo: S, t, interval| {
        Ok(DualSolution {
            best: search.log[search.best].clone(),
            feasible: hi.primal.clone(),
            bracket: (lo, hi.lambda),
            termination: t,
            evaluations: search.log,
            interval,
        })
    };
    if root.is_feasible() {
        let interval = LambdaInterval {
            lo: S::zero(),
            hi: S::zero(),
            capped: false,
        };
        return finish(search, &root, S::zero(), Termination::RootFeasible, interval);
    }
    fastest(inst, restrictions)?;
    let interval = interval_from_root(inst, restrictions, &root)?;
    let eps = tol
        .eps
        .unwrap_or_else(|| S::from_f64_lossy(1e-6) * (S::one() + root.value.abs()));
    let two = S::from_i64(2);

    let mut lo = root;
    let mut hi = search.eval(interval.hi.snap())?;
    let mut guard = 0;
    while !hi.is_feasible() {
        guard += 1;
        if guard > MAX_ITERATIONS {
            return Err(Error::Internal("no multiplier makes the relaxed route feasible".into()).into());
        }
        lo = hi;
        let next = (lo.lambda * two).max_of(S::one());
        hi = search.eval(next)?;
    }

    for _ in 0..MAX_ITERATIONS {
        if hi.lambda - lo.lambda < eps {
            return finish(search, &hi, lo.lambda, Termination::BracketClosed, interval);
        }
        let theta = (hi.value - lo.value + hi.slack * hi.lambda - lo.slack * lo.lambda) / (hi.slack - lo.slack);
        let top = lo.value - lo.slack * (theta - lo.lambda);
        let inside = |x: S| lo.lambda < x && x < hi.lambda;
        let mut lb = theta.snap();
        if !inside(lb) {
            lb = snapped_within(lo.lambda, hi.lambda, (lo.lambda + hi.lambda) / two);
            if !inside(lb) {
                return finish(search, &hi, lo.lambda, Termination::BracketClosed, interval);
            }
        }
        let e = search.eval(lb)?;
        let met = e.value.approx_eq(top) || e.value > top;
        if e.is_feasible() {
            if e.lambda * e.slack <= tol.eps_cs {
                return finish(search, &e, lo.lambda, Termination::ComplementarySlackness, interval);
            }
            hi = e;
        } else {
            lo = e;
        }
        if met {
            // The tangents meet on the graph of L: the maximizer is λ_b.
            // Probe just beside it to pin the bracket down.
            let quarter = eps / S::from_i64(4);
            for probe in [lb - quarter, lb + quarter] {
                let probe = snapped_within(lo.lambda, hi.lambda, probe);
                if !inside_open(lo.lambda, hi.lambda, probe) {
                    continue;
                }
                let p = search.eval(probe)?;
                if p.is_feasible() {
                    if p.lambda * p.slack <= tol.eps_cs {
                        return finish(search, &p, lo.lambda, Termination::ComplementarySlackness, interval);
                    }
                    hi = p;
                } else {
                    lo = p;
                }
            }
        }
    }
    finish(search, &hi, lo.lambda, Termination::IterationLimit, interval)
}

fn inside_open<S: Scalar>(lo: S, hi: S, x: S) -> bool {
    lo < x && x < hi
}

/// `x` snapped to a short fraction, unless that leaves the open interval.
fn snapped_within<S: Scalar>(lo: S, hi: S, x: S) -> S {
    let s = x.snap();
    if inside_open(lo, hi, s) {
        s
    } else {
        x
    }
}
