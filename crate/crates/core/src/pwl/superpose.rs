// SPDX-License-Identifier: Apache-2.0
use std::collections::VecDeque;

use super::envelope::merge_pair;
use super::{envelope, Builder, PwlFunction, Segment, Tag, Transfer};
use crate::scalar::Scalar;

/// `(v ⊞ f)(q) = min { v(q - y) + f(y) : y ∈ D(f), q - y ∈ D(v) }`.
///
/// Output segments inherit the predecessor fields of the `v` segment they come
/// from and record the chosen `y` as a [`Transfer`].
pub fn superpose<S: Scalar>(v: &PwlFunction<S>, f: &PwlFunction<S>) -> PwlFunction<S> {
    if v.is_empty() || f.is_empty() {
        return PwlFunction::empty();
    }
    let per_segment: Vec<PwlFunction<S>> = f.segments().iter().map(|w| with_segment(v, w)).collect();
    envelope(&per_segment).expect("f has at least one segment")
}

/// One member of the parallel family: the line `slope * q + intercept` on `[anchor + wl, anchor + wh]`.
struct Parallel<S> {
    anchor: S,
    intercept: S,
    tag: Tag<S>,
}

/// Lower boundary of `v ⊞ w` for a single segment `w`.
fn with_segment<S: Scalar>(v: &PwlFunction<S>, w: &Segment<S>) -> PwlFunction<S> {
    let (wl, wh) = (w.lo, w.hi);
    let (fwl, fwh) = (w.at(wl), w.at(wh));
    let mut chain_a = Builder::new();
    let mut chain_b = Builder::new();
    let mut family: Vec<Parallel<S>> = Vec::with_capacity(v.len());
    for s in v.segments() {
        let tag = |transfer| Tag { transfer, ..s.tag };
        if s.slope < w.slope {
            // Minimal y first: slide along s, then along w from the right end of s.
            chain_a.push(Segment {
                slope: s.slope,
                intercept: s.intercept - s.slope * wl + fwl,
                lo: s.lo + wl,
                hi: s.hi + wl,
                tag: tag(Transfer::Fixed(wl)),
            });
            family.push(Parallel {
                anchor: s.hi,
                intercept: s.at(s.hi) - w.slope * s.hi + w.intercept,
                tag: tag(Transfer::FromLoad(s.hi)),
            });
        } else {
            family.push(Parallel {
                anchor: s.lo,
                intercept: s.at(s.lo) - w.slope * s.lo + w.intercept,
                tag: tag(Transfer::FromLoad(s.lo)),
            });
            chain_b.push(Segment {
                slope: s.slope,
                intercept: s.intercept - s.slope * wh + fwh,
                lo: s.lo + wh,
                hi: s.hi + wh,
                tag: tag(Transfer::Fixed(wh)),
            });
        }
    }
    let parallel = parallel_envelope(&family, w.slope, wl, wh);
    let ab = merge_pair(&chain_a.finish(), &chain_b.finish());
    merge_pair(&ab, &parallel)
}

/// Envelope of equal-length parallel pieces with sorted anchors, by a sliding-window minimum.
fn parallel_envelope<S: Scalar>(family: &[Parallel<S>], slope: S, wl: S, wh: S) -> PwlFunction<S> {
    let mut events: Vec<S> = Vec::with_capacity(2 * family.len());
    let (mut i, mut j) = (0, 0);
    while i < family.len() || j < family.len() {
        let start = family.get(i).map(|p| p.anchor + wl);
        let end = family.get(j).map(|p| p.anchor + wh);
        let x = match (start, end) {
            (Some(s), Some(e)) if s <= e => {
                i += 1;
                s
            }
            (Some(s), None) => {
                i += 1;
                s
            }
            (_, Some(e)) => {
                j += 1;
                e
            }
            (None, None) => unreachable!(),
        };
        if events.last().is_none_or(|&l: &S| !l.approx_eq(x)) {
            events.push(x);
        }
    }

    let line = |p: &Parallel<S>, lo: S, hi: S| Segment {
        slope,
        intercept: p.intercept,
        lo,
        hi,
        tag: p.tag,
    };
    let mut window: VecDeque<usize> = VecDeque::new();
    let mut next = 0;
    let mut out = Builder::new();
    for (k, &x) in events.iter().enumerate() {
        while next < family.len() && (family[next].anchor + wl).approx_le(x) {
            while window
                .back()
                .is_some_and(|&b| family[next].intercept.definitely_lt(family[b].intercept))
            {
                window.pop_back();
            }
            window.push_back(next);
            next += 1;
        }
        while window
            .front()
            .is_some_and(|&m| (family[m].anchor + wh).definitely_lt(x))
        {
            window.pop_front();
        }
        if let Some(&m) = window.front() {
            out.push(line(&family[m], x, x));
        }
        while window
            .front()
            .is_some_and(|&m| (family[m].anchor + wh).approx_le(x))
        {
            window.pop_front();
        }
        if let (Some(&m), Some(&b)) = (window.front(), events.get(k + 1)) {
            out.push(line(&family[m], x, b));
        }
    }
    out.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v as i128)
    }

    fn lin(slope: i64, intercept: i64, lo: i64, hi: i64) -> Segment<Rational> {
        Segment::new(r(slope), r(intercept), r(lo), r(hi))
    }

    fn func(segs: Vec<Segment<Rational>>) -> PwlFunction<Rational> {
        PwlFunction::new(segs).unwrap()
    }

    #[test]
    fn zero_point_is_identity() {
        let f = func(vec![lin(2, 1, 0, 1), lin(-1, 4, 1, 3)]);
        let v = func(vec![Segment::point(r(0), r(0))]);
        let s = superpose(&v, &f);
        assert_eq!(s.len(), 2);
        for k in 0..=12 {
            let q = Rational::new(k, 4);
            assert_eq!(s.evaluate(q), f.evaluate(q));
        }
    }

    #[test]
    fn convex_pair() {
        let v = func(vec![lin(1, 0, 0, 1)]);
        let f = func(vec![lin(2, 0, 0, 1)]);
        let s = superpose(&v, &f);
        assert_eq!(s.segments().len(), 2);
        let pieces: Vec<_> = s
            .segments()
            .iter()
            .map(|x| (x.slope, x.intercept, x.lo, x.hi))
            .collect();
        assert_eq!(pieces, vec![(r(1), r(0), r(0), r(1)), (r(2), r(-1), r(1), r(2))]);
    }

    #[test]
    fn transfers_reconstruct_the_value() {
        let v = func(vec![lin(3, 0, 0, 2), lin(-1, 8, 2, 4)]);
        let f = func(vec![lin(1, 0, -2, 0), lin(2, 0, 0, 1)]);
        let s = superpose(&v, &f);
        for k in -8..=20 {
            let q = Rational::new(k, 4);
            if let Some(idx) = s.locate(q) {
                let y = s.segments()[idx].tag.transfer.resolve(q).unwrap();
                let direct = v.evaluate(q - y).unwrap() + f.evaluate(y).unwrap();
                assert_eq!(direct, s.evaluate(q).unwrap(), "q = {q}");
            }
        }
    }
}
