// SPDX-License-Identifier: Apache-2.0
//! Elementary-interval sweeps over one or two functions.

use super::{PwlFunction, Segment};
use crate::scalar::Scalar;

/// Sorted, de-duplicated union of all segment borders of `fs`.
pub(super) fn borders<S: Scalar>(fs: &[&PwlFunction<S>]) -> Vec<S> {
    let mut xs: Vec<S> = Vec::with_capacity(fs.iter().map(|f| 2 * f.len()).sum());
    for f in fs {
        for s in f.segments() {
            xs.push(s.lo);
            xs.push(s.hi);
        }
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    xs.dedup_by(|b, a| a.approx_eq(*b));
    xs
}

/// Forward-only cursor answering "which segment covers this point / open interval".
///
/// Queries must come in increasing order of their left end, and the query
/// points must include every border of the function.
pub(super) struct Cover<'a, S> {
    segs: &'a [Segment<S>],
    idx: usize,
}

impl<'a, S: Scalar> Cover<'a, S> {
    pub(super) fn new(f: &'a PwlFunction<S>) -> Self {
        Cover {
            segs: f.segments(),
            idx: 0,
        }
    }

    /// Segment attaining the minimum at `x`, with its value.
    pub(super) fn at_point(&mut self, x: S) -> Option<(&'a Segment<S>, S)> {
        while self.idx < self.segs.len() && self.segs[self.idx].hi.definitely_lt(x) {
            self.idx += 1;
        }
        let mut best: Option<(&'a Segment<S>, S)> = None;
        for s in &self.segs[self.idx..] {
            if x.definitely_lt(s.lo) {
                break;
            }
            let v = s.at(x);
            if best.is_none_or(|(_, b)| v.definitely_lt(b)) {
                best = Some((s, v));
            }
        }
        best
    }

    /// Non-point segment covering the open interval `(a, b)`.
    pub(super) fn over(&mut self, a: S, b: S) -> Option<&'a Segment<S>> {
        while self.idx < self.segs.len() && self.segs[self.idx].hi.approx_le(a) {
            self.idx += 1;
        }
        let s = self.segs.get(self.idx)?;
        (s.lo.approx_le(a) && b.approx_le(s.hi)).then_some(s)
    }
}

/// `f` is defined on `D(g)` and `f <= g` there.
pub(super) fn dominates<S: Scalar>(f: &PwlFunction<S>, g: &PwlFunction<S>) -> bool {
    let xs = borders(&[f, g]);
    let (mut cf, mut cg) = (Cover::new(f), Cover::new(g));
    for (k, &x) in xs.iter().enumerate() {
        if let Some((_, vg)) = cg.at_point(x) {
            match cf.at_point(x) {
                Some((_, vf)) if vf.approx_le(vg) => {}
                _ => return false,
            }
        }
        if let Some(&b) = xs.get(k + 1) {
            if let Some(sg) = cg.over(x, b) {
                match cf.over(x, b) {
                    Some(sf) if sf.at(x).approx_le(sg.at(x)) && sf.at(b).approx_le(sg.at(b)) => {}
                    _ => return false,
                }
            }
        }
    }
    true
}
