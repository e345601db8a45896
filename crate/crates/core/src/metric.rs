// SPDX-License-Identifier: Apache-2.0
//! Shortest and bi-criteria non-dominated forward paths for data that
//! violates the triangle inequality.

use std::cmp::Ordering;

use crate::model::{ArcMatrix, Instance};
use crate::scalar::Scalar;

/// Shortest forward path weight between every pair; `None` when unreachable.
pub fn metric_closure<S: Scalar>(m: &ArcMatrix<S>) -> ArcMatrix<S> {
    let n = m.len();
    let mut d: ArcMatrix<S> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let mut best = m[i][j];
            for k in i + 1..j {
                if let (Some(a), Some(b)) = (d[i][k], m[k][j]) {
                    let via = a + b;
                    if best.is_none_or(|x| via < x) {
                        best = Some(via);
                    }
                }
            }
            d[i][j] = best;
        }
    }
    d
}

/// Arc weights `c + λ t`, forbidden where either component is.
pub fn combined_weights<S: Scalar>(inst: &Instance<S>, lambda: S) -> ArcMatrix<S> {
    let n = inst.n;
    (0..n)
        .map(|i| (0..n).map(|j| inst.arc(i, j).map(|(c, t)| c + lambda * t)).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParetoPath<S> {
    pub cost: S,
    pub time: S,
    /// Node sequence from the start to the end of the path, both included.
    pub via: Vec<usize>,
}

/// Non-dominated `(cost, time)` forward paths for every ordered pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoPathSet<S> {
    paths: Vec<Vec<Vec<ParetoPath<S>>>>,
}

impl<S: Scalar> ParetoPathSet<S> {
    pub fn get(&self, i: usize, j: usize) -> &[ParetoPath<S>] {
        &self.paths[i][j]
    }

    pub fn n(&self) -> usize {
        self.paths.len()
    }
}

fn lex_then_via<S: Scalar>(a: &ParetoPath<S>, b: &ParetoPath<S>) -> Ordering {
    a.cost
        .total_cmp(&b.cost)
        .then(a.time.total_cmp(&b.time))
        .then_with(|| a.via.cmp(&b.via))
}

/// Keep labels not weakly dominated by another; among equal labels the
/// lexicographically smallest path survives.
fn pareto_filter<S: Scalar>(mut labels: Vec<ParetoPath<S>>) -> Vec<ParetoPath<S>> {
    labels.sort_by(lex_then_via);
    let mut kept: Vec<ParetoPath<S>> = Vec::with_capacity(labels.len());
    for l in labels {
        // Sorted by cost, so only the smallest time seen so far matters.
        if kept.last().is_none_or(|k| l.time < k.time) {
            kept.push(l);
        }
    }
    kept
}

pub fn pareto_paths<S: Scalar>(inst: &Instance<S>) -> ParetoPathSet<S> {
    let n = inst.n;
    let mut paths = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let mut labels = Vec::new();
            if let Some((c, t)) = inst.arc(i, j) {
                labels.push(ParetoPath {
                    cost: c,
                    time: t,
                    via: vec![i, j],
                });
            }
            for k in i + 1..j {
                let Some((c, t)) = inst.arc(k, j) else { continue };
                for p in &paths[i][k] {
                    let p: &ParetoPath<S> = p;
                    let mut via = p.via.clone();
                    via.push(j);
                    labels.push(ParetoPath {
                        cost: p.cost + c,
                        time: p.time + t,
                        via,
                    });
                }
            }
            paths[i][j] = pareto_filter(labels);
        }
    }
    ParetoPathSet { paths }
}

/// Minimum-time forward path from the first to the last node as `(time, cost, visits)`.
pub fn min_time_route<S: Scalar>(inst: &Instance<S>, allowed: impl Fn(usize, usize) -> bool) -> Option<(S, S, Vec<usize>)> {
    let n = inst.n;
    let mut best: Vec<Option<(S, S, usize)>> = vec![None; n];
    best[0] = Some((S::zero(), S::zero(), usize::MAX));
    for j in 1..n {
        for i in 0..j {
            let Some((ti, ci, _)) = best[i] else { continue };
            if !allowed(i, j) {
                continue;
            }
            let Some((c, t)) = inst.arc(i, j) else { continue };
            let cand = (ti + t, ci + c, i);
            let better = match best[j] {
                None => true,
                Some((tj, cj, _)) => cand.0 < tj || (cand.0 == tj && cand.1 < cj),
            };
            if better {
                best[j] = Some(cand);
            }
        }
    }
    let (t, c, _) = best[n - 1]?;
    let mut visits = vec![n - 1];
    let mut k = n - 1;
    while k != 0 {
        k = best[k].expect("reached").2;
        visits.push(k);
    }
    visits.reverse();
    Some((t, c, visits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwl::{PwlFunction, Segment};
    use crate::scalar::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v as i128)
    }

    fn three(c13: i64, t13: i64) -> Instance<Rational> {
        let mut cost = vec![vec![None; 3]; 3];
        let mut time = vec![vec![None; 3]; 3];
        cost[0][1] = Some(r(2));
        cost[1][2] = Some(r(2));
        cost[0][2] = Some(r(c13));
        time[0][1] = Some(r(2));
        time[1][2] = Some(r(3));
        time[0][2] = Some(r(t13));
        let f = PwlFunction::new(vec![Segment::point(r(0), r(0))]).unwrap();
        Instance::new(cost, time, vec![f; 3], r(0), None).unwrap()
    }

    #[test]
    fn two_hop_shortcut() {
        let inst = three(10, 1);
        let d = metric_closure(&inst.cost);
        assert_eq!(d[0][2], Some(r(4)));
        assert_eq!(d[0][1], Some(r(2)));
    }

    #[test]
    fn metric_matrix_is_unchanged() {
        let inst = three(3, 5);
        assert_eq!(metric_closure(&inst.cost), inst.cost);
    }

    #[test]
    fn incomparable_paths_both_kept() {
        let inst = three(10, 1);
        let p = pareto_paths(&inst);
        let got: Vec<_> = p.get(0, 2).iter().map(|x| (x.cost, x.time, x.via.clone())).collect();
        assert_eq!(got, vec![(r(4), r(5), vec![0, 1, 2]), (r(10), r(1), vec![0, 2])]);
    }

    #[test]
    fn equal_labels_keep_smallest_via() {
        let inst = three(4, 5);
        let p = pareto_paths(&inst);
        assert_eq!(p.get(0, 2).len(), 1);
        assert_eq!(p.get(0, 2)[0].via, vec![0, 1, 2]);
    }

    #[test]
    fn min_time_prefers_fast_arc() {
        let inst = three(10, 1);
        let (t, c, v) = min_time_route(&inst, |_, _| true).unwrap();
        assert_eq!((t, c, v), (r(1), r(10), vec![0, 2]));
    }
}
