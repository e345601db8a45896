// SPDX-License-Identifier: Apache-2.0
//! One entry point over the three exact methods.

use std::fmt;
use std::str::FromStr;

use crate::bnb::{solve_bbdp, BnbOptions};
use crate::dp::{solve_no_duration, solve_with_duration, DpOptions};
use crate::error::{Error, Result};
use crate::lswrc::{plan_from_solution, reduce_to_areltp, LotSizingInstance, Plan};
use crate::model::{Instance, Solution};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Dp,
    Dp3d,
    Bbdp,
    /// `Dp` without a duration limit, `Bbdp` with one.
    Auto,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dp => "dp",
            Method::Dp3d => "dp3d",
            Method::Bbdp => "bbdp",
            Method::Auto => "auto",
        }
    }

    /// The concrete method `Auto` stands for on this instance.
    pub fn resolve<S>(self, inst: &Instance<S>) -> Method {
        match (self, inst.tmax.is_some()) {
            (Method::Auto, true) => Method::Bbdp,
            (Method::Auto, false) => Method::Dp,
            (m, _) => m,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dp" => Ok(Method::Dp),
            "dp3d" => Ok(Method::Dp3d),
            "bbdp" => Ok(Method::Bbdp),
            "auto" => Ok(Method::Auto),
            other => Err(Error::Unsupported(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub method: Method,
    /// Branching seed for `Bbdp`.
    pub seed: u64,
    pub integer_mode: Option<bool>,
    pub force_empty_end: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: Method::Auto,
            seed: 0,
            integer_mode: None,
            force_empty_end: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solved<S> {
    pub solution: Solution<S>,
    /// The method that actually ran.
    pub method: Method,
    /// Root Lagrangian bound, `Bbdp` only.
    pub dual_bound: Option<S>,
    /// Branch-and-bound nodes evaluated, `Bbdp` only.
    pub nodes: Option<usize>,
}

/// Solve an instance with the chosen method.
///
/// `Dp` refuses instances with a duration limit instead of silently
/// ignoring it.
pub fn solve<S: Scalar>(inst: &Instance<S>, opts: &SolveOptions) -> Result<Solved<S>> {
    let method = opts.method.resolve(inst);
    let dp = DpOptions {
        integer_mode: opts.integer_mode,
        force_empty_end: opts.force_empty_end,
        ..DpOptions::default()
    };
    let plain = |solution| Solved {
        solution,
        method,
        dual_bound: None,
        nodes: None,
    };
    match method {
        Method::Dp => {
            if inst.tmax.is_some() {
                return Err(Error::InvalidInstance(
                    "dp ignores the duration limit; use dp3d or bbdp".into(),
                ));
            }
            Ok(plain(solve_no_duration(inst, &dp)?.solution))
        }
        Method::Dp3d => Ok(plain(solve_with_duration(inst, &dp)?.solution)),
        Method::Bbdp | Method::Auto => {
            let bnb = BnbOptions {
                seed: opts.seed,
                integer_mode: opts.integer_mode,
                force_empty_end: opts.force_empty_end,
                ..BnbOptions::default()
            };
            let out = solve_bbdp(inst, &bnb)?;
            Ok(Solved {
                solution: out.solution,
                method,
                dual_bound: Some(out.root_lower_bound),
                nodes: Some(out.nodes),
            })
        }
    }
}

/// A lot-sizing optimum in both views.
#[derive(Clone, Debug)]
pub struct SolvedLotSizing<S> {
    pub reduced: Solved<S>,
    pub plan: Plan<S>,
}

/// Reduce, solve and map back; the plan total is evaluated directly.
pub fn solve_lot_sizing<S: Scalar>(ls: &LotSizingInstance<S>, opts: &SolveOptions) -> Result<SolvedLotSizing<S>> {
    let (inst, _) = reduce_to_areltp(ls)?;
    let reduced = solve(&inst, opts)?;
    let plan = plan_from_solution(ls, &reduced.solution)?;
    Ok(SolvedLotSizing { reduced, plan })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwl::PwlFunction;
    use crate::scalar::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v as i128)
    }

    fn chain(tmax: Option<i64>) -> Instance<Rational> {
        let n = 4;
        let mut cost = vec![vec![None; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                cost[i][j] = Some(r((j - i) as i64 * 2 + 1));
            }
        }
        let f = |pts: &[(i64, i64)]| {
            PwlFunction::from_breakpoints(&pts.iter().map(|&(x, y)| (r(x), r(y))).collect::<Vec<_>>()).unwrap()
        };
        let profit = vec![f(&[(0, 0), (2, -6)]), f(&[(0, 0), (2, -8)]), f(&[(-2, -10), (0, 0)]), f(&[(-2, -4), (0, 0)])];
        Instance::with_time_equal_cost(cost, profit, r(4), tmax.map(r)).unwrap()
    }

    #[test]
    fn auto_follows_the_limit() {
        assert_eq!(Method::Auto.resolve(&chain(None)), Method::Dp);
        assert_eq!(Method::Auto.resolve(&chain(Some(6))), Method::Bbdp);
        assert_eq!(Method::Dp3d.resolve(&chain(None)), Method::Dp3d);
    }

    #[test]
    fn methods_agree() {
        for tmax in [None, Some(9), Some(8), Some(7)] {
            let inst = chain(tmax);
            let methods = if tmax.is_some() {
                vec![Method::Dp3d, Method::Bbdp, Method::Auto]
            } else {
                vec![Method::Dp3d, Method::Dp, Method::Auto]
            };
            let objs: Vec<_> = methods
                .into_iter()
                .map(|method| {
                    let opts = SolveOptions {
                        method,
                        ..SolveOptions::default()
                    };
                    solve(&inst, &opts).unwrap().solution.objective
                })
                .collect();
            assert!(objs.windows(2).all(|w| w[0] == w[1]), "{tmax:?}: {objs:?}");
        }
    }

    #[test]
    fn dp_rejects_a_limit() {
        let opts = SolveOptions {
            method: Method::Dp,
            ..SolveOptions::default()
        };
        assert!(matches!(solve(&chain(Some(6)), &opts), Err(Error::InvalidInstance(_))));
        assert!(solve(&chain(None), &opts).is_ok());
    }

    #[test]
    fn parses_names() {
        for m in [Method::Dp, Method::Dp3d, Method::Bbdp, Method::Auto] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("simplex".parse::<Method>().is_err());
    }
}
