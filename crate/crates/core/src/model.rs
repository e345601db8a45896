// SPDX-License-Identifier: Apache-2.0
//! Problem data, solutions, and the canonical minimization objective.
//!
//! Nodes are numbered `0..n` along the a-priori route. Arcs only go forward.
//! A route visits node `0` and node `n - 1` and any subsequence of the nodes
//! between them. At a visited node `i` the load changes by `y_i ∈ D(f_i)` at
//! cost `f_i(y_i)`. At a skipped node the load changes by `skip_load[i]` at
//! cost `skip_cost[i]`; both are zero for plain route-evaluation instances
//! and carry the demand and holding terms of reduced lot-sizing instances.

use crate::error::{Error, Result};
use crate::pwl::PwlFunction;
use crate::scalar::Scalar;

/// Dense forward-arc matrix; `None` marks a forbidden arc.
pub type ArcMatrix<S> = Vec<Vec<Option<S>>>;

/// Whether cost and time satisfy the triangle inequality over forward arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricFlags {
    pub cost: bool,
    pub time: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance<S> {
    pub n: usize,
    pub cost: ArcMatrix<S>,
    pub time: ArcMatrix<S>,
    pub profit: Vec<PwlFunction<S>>,
    pub qmax: S,
    pub tmax: Option<S>,
    pub skip_load: Vec<S>,
    pub skip_cost: Vec<S>,
    pub metric: MetricFlags,
}

impl<S: Scalar> Instance<S> {
    /// Build and check an instance; metric flags are computed from the data.
    pub fn new(
        cost: ArcMatrix<S>,
        time: ArcMatrix<S>,
        profit: Vec<PwlFunction<S>>,
        qmax: S,
        tmax: Option<S>,
    ) -> Result<Self> {
        let n = profit.len();
        let mut inst = Instance {
            n,
            cost,
            time,
            profit,
            qmax,
            tmax,
            skip_load: vec![S::zero(); n],
            skip_cost: vec![S::zero(); n],
            metric: MetricFlags {
                cost: true,
                time: true,
            },
        };
        inst.check()?;
        inst.metric = MetricFlags {
            cost: satisfies_triangle(&inst.cost),
            time: satisfies_triangle(&inst.time),
        };
        Ok(inst)
    }

    /// Same instance with the time matrix equal to the cost matrix.
    pub fn with_time_equal_cost(
        cost: ArcMatrix<S>,
        profit: Vec<PwlFunction<S>>,
        qmax: S,
        tmax: Option<S>,
    ) -> Result<Self> {
        let time = cost.clone();
        Instance::new(cost, time, profit, qmax, tmax)
    }

    pub fn with_skip_terms(mut self, skip_load: Vec<S>, skip_cost: Vec<S>) -> Result<Self> {
        self.skip_load = skip_load;
        self.skip_cost = skip_cost;
        self.check()?;
        Ok(self)
    }

    pub fn with_tmax(mut self, tmax: Option<S>) -> Self {
        self.tmax = tmax;
        self
    }

    /// Hard structural invariants.
    pub fn check(&self) -> Result<()> {
        let n = self.n;
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if n < 2 {
            return bad(format!("need at least 2 nodes, got {n}"));
        }
        for (name, m) in [("cost", &self.cost), ("time", &self.time)] {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return bad(format!("{name} matrix must be {n}x{n}"));
            }
        }
        if self.skip_load.len() != n || self.skip_cost.len() != n {
            return bad("skip terms must have one entry per node".into());
        }
        for i in 0..n {
            for j in i + 1..n {
                match (self.cost[i][j], self.time[i][j]) {
                    (Some(_), None) => return bad(format!("arc ({i},{j}) has a cost but no time")),
                    (_, Some(t)) if t < S::zero() => {
                        return bad(format!("arc ({i},{j}) has negative time {t}"))
                    }
                    _ => {}
                }
            }
        }
        if self.qmax < S::zero() {
            return bad(format!("qmax {} is negative", self.qmax));
        }
        for (i, f) in self.profit.iter().enumerate() {
            if f.is_empty() {
                return bad(format!("profit function of node {i} has an empty domain"));
            }
            PwlFunction::new(f.segments().to_vec())
                .map_err(|e| Error::InvalidInstance(format!("node {i}: {e}")))?;
        }
        Ok(())
    }

    /// Soft conditions worth reporting; none of them stops a solver.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, f) in self.profit.iter().enumerate() {
            let (a, b) = f.bounds().expect("checked non-empty");
            if a > S::zero() || b < S::zero() {
                out.push(format!("node {i}: domain [{a}, {b}] does not contain 0"));
            } else if f.evaluate(S::zero()).is_none() {
                out.push(format!("node {i}: f(0) is undefined"));
            }
        }
        out
    }

    /// `(cost, time)` of the forward arc `i -> j`, if allowed.
    #[inline]
    pub fn arc(&self, i: usize, j: usize) -> Option<(S, S)> {
        if i >= j {
            return None;
        }
        Some((self.cost[i][j]?, self.time[i][j]?))
    }

    /// True when breakpoints, capacity and skip loads are all integers.
    pub fn is_integral(&self) -> bool {
        self.qmax.is_integral()
            && self.skip_load.iter().all(|s| s.is_integral())
            && self.profit.iter().all(|f| f.has_integer_borders())
    }

    /// True when every profit function is nondecreasing.
    pub fn has_monotone_profits(&self) -> bool {
        self.profit.iter().all(|f| f.is_nondecreasing())
    }

    /// Total time of a visit sequence; `None` if it uses a forbidden arc.
    pub fn route_time(&self, visits: &[usize]) -> Option<S> {
        visits
            .windows(2)
            .try_fold(S::zero(), |acc, w| Some(acc + self.arc(w[0], w[1])?.1))
    }

    pub fn route_cost(&self, visits: &[usize]) -> Option<S> {
        visits
            .windows(2)
            .try_fold(S::zero(), |acc, w| Some(acc + self.arc(w[0], w[1])?.0))
    }
}

/// Triangle inequality over forward arcs, with forbidden arcs treated as infinite.
pub fn satisfies_triangle<S: Scalar>(m: &ArcMatrix<S>) -> bool {
    let n = m.len();
    for i in 0..n {
        for k in i + 1..n {
            for j in k + 1..n {
                if let (Some(a), Some(b)) = (m[i][k], m[k][j]) {
                    match m[i][j] {
                        Some(direct) if direct.approx_le(a + b) => {}
                        _ => return false,
                    }
                }
            }
        }
    }
    true
}

/// A route with its transfers and certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<S> {
    /// Strictly increasing, starting at `0` and ending at `n - 1`.
    pub visits: Vec<usize>,
    /// Load change at every node, skipped nodes included.
    pub y: Vec<S>,
    pub objective: S,
    pub duration: S,
    /// Load when leaving each node.
    pub load_profile: Vec<S>,
}

impl<S: Scalar> Solution<S> {
    /// Complete a solution from visits and transfers at visited nodes.
    ///
    /// `y` may have one entry per node or one per visit.
    pub fn from_route(inst: &Instance<S>, visits: Vec<usize>, y: &[S]) -> Result<Self> {
        let full = if y.len() == inst.n {
            y.to_vec()
        } else if y.len() == visits.len() {
            let mut full = inst.skip_load.clone();
            for (k, &i) in visits.iter().enumerate() {
                if i < inst.n {
                    full[i] = y[k];
                }
            }
            full
        } else {
            return Err(Error::InvalidSolution(vec![format!(
                "expected {} or {} transfers, got {}",
                inst.n,
                visits.len(),
                y.len()
            )]));
        };
        let mut sol = Solution {
            visits,
            y: full,
            objective: S::zero(),
            duration: S::zero(),
            load_profile: Vec::new(),
        };
        sol.objective = objective(inst, &sol)?;
        sol.duration = inst.route_time(&sol.visits).expect("checked by objective");
        sol.load_profile = prefix_sums(&sol.y);
        Ok(sol)
    }
}

fn prefix_sums<S: Scalar>(y: &[S]) -> Vec<S> {
    y.iter()
        .scan(S::zero(), |acc, &v| {
            *acc = *acc + v;
            Some(*acc)
        })
        .collect()
}

/// Structural problems: visit sequence, arcs, transfer domains.
fn structural_violations<S: Scalar>(inst: &Instance<S>, sol: &Solution<S>) -> Vec<String> {
    let n = inst.n;
    let mut v = Vec::new();
    if sol.visits.first() != Some(&0) {
        v.push("route must start at node 0".to_string());
    }
    if sol.visits.last() != Some(&(n - 1)) {
        v.push(format!("route must end at node {}", n - 1));
    }
    if sol.visits.iter().any(|&i| i >= n) {
        v.push("visit index out of range".to_string());
        return v;
    }
    for w in sol.visits.windows(2) {
        if w[0] >= w[1] {
            v.push(format!("visits not strictly increasing at {} -> {}", w[0], w[1]));
        } else if inst.arc(w[0], w[1]).is_none() {
            v.push(format!("arc ({},{}) is forbidden", w[0], w[1]));
        }
    }
    if sol.y.len() != n {
        v.push(format!("expected {n} transfers, got {}", sol.y.len()));
        return v;
    }
    let mut visited = vec![false; n];
    for &i in &sol.visits {
        visited[i] = true;
    }
    for i in 0..n {
        if visited[i] {
            if inst.profit[i].evaluate(sol.y[i]).is_none() {
                v.push(format!("transfer {} outside the domain of node {i}", sol.y[i]));
            }
        } else if !sol.y[i].approx_eq(inst.skip_load[i]) {
            v.push(format!(
                "skipped node {i} has transfer {} instead of {}",
                sol.y[i], inst.skip_load[i]
            ));
        }
    }
    v
}

/// Travel cost plus transfer costs; skipped nodes contribute their skip cost.
pub fn objective<S: Scalar>(inst: &Instance<S>, sol: &Solution<S>) -> Result<S> {
    let problems = structural_violations(inst, sol);
    if !problems.is_empty() {
        return Err(Error::InvalidSolution(problems));
    }
    let mut total = inst.route_cost(&sol.visits).expect("arcs checked");
    let mut visited = vec![false; inst.n];
    for &i in &sol.visits {
        visited[i] = true;
        total = total + inst.profit[i].evaluate(sol.y[i]).expect("domain checked");
    }
    for i in 0..inst.n {
        if !visited[i] {
            total = total + inst.skip_cost[i];
        }
    }
    Ok(total)
}

/// Every violated solution invariant; empty when feasible.
pub fn validate<S: Scalar>(inst: &Instance<S>, sol: &Solution<S>) -> std::result::Result<(), Vec<String>> {
    let mut v = structural_violations(inst, sol);
    if !v.is_empty() {
        return Err(v);
    }
    let loads = prefix_sums(&sol.y);
    for (k, &q) in loads.iter().enumerate() {
        if q.definitely_lt(S::zero()) {
            v.push(format!("load below 0 before node {}", k + 1));
        }
        if inst.qmax.definitely_lt(q) {
            v.push(format!("load above {} before node {}", inst.qmax, k + 1));
        }
    }
    let duration = inst.route_time(&sol.visits).expect("arcs checked");
    if let Some(tmax) = inst.tmax {
        if tmax.definitely_lt(duration) {
            v.push(format!("duration limit: {duration} > {tmax}"));
        }
    }
    if !duration.approx_eq(sol.duration) {
        v.push(format!("recorded duration {} differs from {duration}", sol.duration));
    }
    let obj = objective(inst, sol).expect("structure checked");
    if !obj.approx_eq(sol.objective) {
        v.push(format!("recorded objective {} differs from {obj}", sol.objective));
    }
    if sol.load_profile.len() != loads.len()
        || sol.load_profile.iter().zip(&loads).any(|(a, b)| !a.approx_eq(*b))
    {
        v.push("recorded load profile differs from the prefix sums of y".to_string());
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}
