// SPDX-License-Identifier: Apache-2.0
//! Lot sizing with requalification costs and its reduction to route evaluation.
//!
//! Periods play the role of nodes. Producing in period `i` is a visit, the
//! setup cost between two consecutive production periods is the arc cost, and
//! inventory is the vehicle load. Holding costs are folded into the transfer
//! functions through the tail sums `H_i = h_i + ... + h_n`.
//!
//! A period without production carries no production cost. Its demand still
//! leaves the inventory, which the reduced instance expresses through the skip
//! load `-d_i` and the skip cost `-H_i d_i`.

use crate::error::{Error, Result};
use crate::model::{ArcMatrix, Instance, Solution};
use crate::pwl::PwlFunction;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct LotSizingInstance<S> {
    pub n: usize,
    pub demand: Vec<S>,
    pub holding: Vec<S>,
    /// Production cost per period, defined on `[a_i, b_i]`.
    pub production: Vec<PwlFunction<S>>,
    pub setup_cost: ArcMatrix<S>,
    pub setup_time: ArcMatrix<S>,
    pub qmax: S,
    pub tmax: Option<S>,
}

impl<S: Scalar> LotSizingInstance<S> {
    pub fn new(
        demand: Vec<S>,
        holding: Vec<S>,
        production: Vec<PwlFunction<S>>,
        setup_cost: ArcMatrix<S>,
        setup_time: Option<ArcMatrix<S>>,
        qmax: S,
        tmax: Option<S>,
    ) -> Result<Self> {
        let n = demand.len();
        let ls = LotSizingInstance {
            n,
            demand,
            holding,
            production,
            setup_time: setup_time.unwrap_or_else(|| setup_cost.clone()),
            setup_cost,
            qmax,
            tmax,
        };
        ls.check()?;
        Ok(ls)
    }

    pub fn check(&self) -> Result<()> {
        let n = self.n;
        if self.holding.len() != n || self.production.len() != n {
            return Err(Error::InvalidInstance(
                "demand, holding and production must have one entry per period".into(),
            ));
        }
        for i in 0..n {
            if self.demand[i] < S::zero() {
                return Err(Error::InvalidInstance(format!("period {i}: negative demand")));
            }
            if self.holding[i] < S::zero() {
                return Err(Error::InvalidInstance(format!("period {i}: negative holding cost")));
            }
        }
        self.reduce().map(|_| ())
    }

    /// `H_i = Σ_{j >= i} h_j`.
    pub fn tail_holding(&self) -> Vec<S> {
        let mut h = vec![S::zero(); self.n];
        let mut acc = S::zero();
        for i in (0..self.n).rev() {
            acc = acc + self.holding[i];
            h[i] = acc;
        }
        h
    }

    fn reduce(&self) -> Result<Instance<S>> {
        let tail = self.tail_holding();
        let profit = (0..self.n)
            .map(|i| self.production[i].translate(-self.demand[i]).add_linear(tail[i], S::zero()))
            .collect();
        let skip_load = self.demand.iter().map(|&d| -d).collect();
        let skip_cost = (0..self.n).map(|i| -(tail[i] * self.demand[i])).collect();
        Instance::new(
            self.setup_cost.clone(),
            self.setup_time.clone(),
            profit,
            self.qmax,
            self.tmax,
        )?
        .with_skip_terms(skip_load, skip_cost)
    }

    /// Periods whose demand cannot be produced in the same period.
    pub fn warnings(&self) -> Vec<String> {
        (0..self.n)
            .filter(|&i| self.demand[i] > S::zero() && self.production[i].evaluate(self.demand[i]).is_none())
            .map(|i| format!("period {i}: demand {} lies outside the production range", self.demand[i]))
            .collect()
    }
}

/// The equivalent route-evaluation instance and the objective offset between the two.
pub fn reduce_to_areltp<S: Scalar>(ls: &LotSizingInstance<S>) -> Result<(Instance<S>, S)> {
    Ok((ls.reduce()?, S::zero()))
}

/// A production plan with its cost components.
#[derive(Clone, Debug, PartialEq)]
pub struct Plan<S> {
    /// Production periods, in increasing order.
    pub setups: Vec<usize>,
    /// Production in every period.
    pub production: Vec<S>,
    /// Inventory at the end of every period.
    pub inventory: Vec<S>,
    pub setup_cost: S,
    pub production_cost: S,
    pub holding_cost: S,
    pub setup_time: S,
}

impl<S: Scalar> Plan<S> {
    pub fn total(&self) -> S {
        self.setup_cost + self.production_cost + self.holding_cost
    }
}

/// Cost a plan directly from the lot-sizing data, checking every constraint.
pub fn evaluate_plan<S: Scalar>(ls: &LotSizingInstance<S>, setups: &[usize], production: &[S]) -> Result<Plan<S>> {
    let n = ls.n;
    let mut errs = Vec::new();
    if setups.first() != Some(&0) || setups.last() != Some(&(n - 1)) {
        errs.push("production must be set up in the first and last period".to_string());
    }
    if production.len() != n {
        return Err(Error::InvalidSolution(vec![format!("expected {n} production values")]));
    }
    let mut active = vec![false; n];
    let mut setup_cost = S::zero();
    let mut setup_time = S::zero();
    for w in setups.windows(2) {
        match (w[0] < w[1]).then(|| ls.setup_cost[w[0]][w[1]].zip(ls.setup_time[w[0]][w[1]])).flatten() {
            Some((c, t)) => {
                setup_cost = setup_cost + c;
                setup_time = setup_time + t;
            }
            None => errs.push(format!("no setup from period {} to {}", w[0], w[1])),
        }
    }
    let mut production_cost = S::zero();
    for &i in setups {
        if i < n {
            active[i] = true;
        }
    }
    for i in 0..n {
        if active[i] {
            match ls.production[i].evaluate(production[i]) {
                Some(c) => production_cost = production_cost + c,
                None => errs.push(format!("period {i}: production {} out of range", production[i])),
            }
        } else if production[i] != S::zero() {
            errs.push(format!("period {i}: production without setup"));
        }
    }
    let mut inventory = Vec::with_capacity(n);
    let mut q = S::zero();
    let mut holding_cost = S::zero();
    for i in 0..n {
        q = q + production[i] - ls.demand[i];
        if q.definitely_lt(S::zero()) {
            errs.push(format!("period {i}: demand not met"));
        }
        if ls.qmax.definitely_lt(q) {
            errs.push(format!("period {i}: inventory above capacity"));
        }
        holding_cost = holding_cost + ls.holding[i] * q;
        inventory.push(q);
    }
    if let Some(tmax) = ls.tmax {
        if tmax.definitely_lt(setup_time) {
            errs.push(format!("setup budget exceeded: {setup_time} > {tmax}"));
        }
    }
    if !errs.is_empty() {
        return Err(Error::InvalidSolution(errs));
    }
    Ok(Plan {
        setups: setups.to_vec(),
        production: production.to_vec(),
        inventory,
        setup_cost,
        production_cost,
        holding_cost,
        setup_time,
    })
}

/// Map a reduced solution back to production quantities and cost it.
pub fn plan_from_solution<S: Scalar>(ls: &LotSizingInstance<S>, sol: &Solution<S>) -> Result<Plan<S>> {
    let mut production = vec![S::zero(); ls.n];
    for &i in &sol.visits {
        production[i] = sol.y[i] + ls.demand[i];
    }
    evaluate_plan(ls, &sol.visits, &production)
}

/// Production of every period's demand in that period.
pub fn l4l_plan<S: Scalar>(ls: &LotSizingInstance<S>) -> Result<Plan<S>> {
    let n = ls.n;
    for i in 0..n {
        let d = ls.demand[i];
        if d > S::zero() && ls.production[i].evaluate(d).is_none() {
            return Err(Error::L4lInfeasible(format!("period {i}: demand {d} outside the production range")));
        }
        if i + 1 < n && ls.setup_cost[i][i + 1].is_none() {
            return Err(Error::L4lInfeasible(format!("no setup from period {i} to {}", i + 1)));
        }
    }
    let setups: Vec<usize> = (0..n).collect();
    let mut plan = Plan {
        setups,
        production: ls.demand.clone(),
        inventory: vec![S::zero(); n],
        setup_cost: S::zero(),
        production_cost: S::zero(),
        holding_cost: S::zero(),
        setup_time: S::zero(),
    };
    for i in 0..n {
        plan.production_cost = plan.production_cost + ls.production[i].evaluate(ls.demand[i]).unwrap_or(S::zero());
        if i + 1 < n {
            plan.setup_cost = plan.setup_cost + ls.setup_cost[i][i + 1].expect("checked");
            plan.setup_time = plan.setup_time + ls.setup_time[i][i + 1].unwrap_or(S::zero());
        }
    }
    Ok(plan)
}

/// Cost of the lot-for-lot plan: `Σ f_i(d_i) + Σ c_{i,i+1}`.
pub fn l4l_value<S: Scalar>(ls: &LotSizingInstance<S>) -> Result<S> {
    l4l_plan(ls).map(|p| p.total())
}

/// Relative savings against lot-for-lot, split by cost type.
///
/// `total = production - setup - inventory` holds by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Savings<S> {
    pub total: S,
    pub production: S,
    pub setup: S,
    pub inventory: S,
}

pub fn savings_decomposition<S: Scalar>(ls: &LotSizingInstance<S>, optimal: &Solution<S>) -> Result<Savings<S>> {
    let base = l4l_plan(ls)?;
    let z = base.total();
    if z == S::zero() {
        return Err(Error::UndefinedRatio("lot-for-lot cost is zero".into()));
    }
    let plan = plan_from_solution(ls, optimal)?;
    Ok(Savings {
        total: (z - plan.total()) / z,
        production: (base.production_cost - plan.production_cost) / z,
        setup: (plan.setup_cost - base.setup_cost) / z,
        inventory: plan.holding_cost / z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwl::Segment;
    use crate::scalar::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v as i128)
    }

    fn linear(slope: i64, hi: i64) -> PwlFunction<Rational> {
        PwlFunction::new(vec![Segment::new(r(slope), r(0), r(0), r(hi))]).unwrap()
    }

    fn chain(c: &[i64]) -> ArcMatrix<Rational> {
        let n = c.len() + 1;
        let mut m = vec![vec![None; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                m[i][j] = Some(r(c[i..j].iter().sum::<i64>() + 1));
            }
            if i + 1 < n {
                m[i][i + 1] = Some(r(c[i]));
            }
        }
        m
    }

    #[test]
    fn holding_tail_sums_enter_transfer_functions() {
        let ls = LotSizingInstance::new(
            vec![r(2), r(3)],
            vec![r(1), r(1)],
            vec![linear(1, 10), linear(1, 10)],
            chain(&[4]),
            None,
            r(10),
            None,
        )
        .unwrap();
        assert_eq!(ls.tail_holding(), vec![r(2), r(1)]);
        let (inst, offset) = reduce_to_areltp(&ls).unwrap();
        assert_eq!(offset, r(0));
        for y in -2..=8 {
            let expect = ls.production[0].evaluate(r(y) + r(2)).map(|v| v + r(2) * r(y));
            assert_eq!(inst.profit[0].evaluate(r(y)), expect);
        }
    }

    #[test]
    fn l4l_sums_production_and_consecutive_setups() {
        let f = |k: i64| PwlFunction::new(vec![Segment::new(r(0), r(k), r(0), r(5))]).unwrap();
        let ls = LotSizingInstance::new(
            vec![r(1), r(1), r(1)],
            vec![r(0); 3],
            vec![f(1), f(2), f(3)],
            chain(&[4, 5]),
            None,
            r(5),
            None,
        )
        .unwrap();
        assert_eq!(l4l_value(&ls).unwrap(), r(15));
    }

    #[test]
    fn l4l_outside_range_is_reported() {
        let ls = LotSizingInstance::new(
            vec![r(7), r(0)],
            vec![r(0); 2],
            vec![linear(1, 5), linear(1, 5)],
            chain(&[1]),
            None,
            r(10),
            None,
        )
        .unwrap();
        assert!(matches!(l4l_value(&ls), Err(Error::L4lInfeasible(_))));
        assert_eq!(ls.warnings().len(), 1);
    }

    #[test]
    fn self_comparison_has_no_savings() {
        let ls = LotSizingInstance::new(
            vec![r(2), r(1), r(3)],
            vec![r(1), r(2), r(1)],
            vec![linear(2, 9), linear(3, 9), linear(1, 9)],
            chain(&[5, 6]),
            None,
            r(9),
            None,
        )
        .unwrap();
        let (inst, _) = reduce_to_areltp(&ls).unwrap();
        let sol = Solution::from_route(&inst, vec![0, 1, 2], &[r(0), r(0), r(0)]).unwrap();
        let s = savings_decomposition(&ls, &sol).unwrap();
        assert_eq!(s, Savings { total: r(0), production: r(0), setup: r(0), inventory: r(0) });
        let plan = plan_from_solution(&ls, &sol).unwrap();
        assert_eq!(plan.total(), sol.objective);
    }
}
