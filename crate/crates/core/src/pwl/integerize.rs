// SPDX-License-Identifier: Apache-2.0
use super::{Builder, PwlFunction, Segment};
use crate::scalar::Scalar;

/// Round every border inward to an integer, drop segments without an integer
/// point, and where two segments still touch with different values at the
/// shared integer, shrink the one with the larger value by one unit.
pub(super) fn integerize<S: Scalar>(f: &PwlFunction<S>) -> PwlFunction<S> {
    let one = S::one();
    let mut out: Vec<Segment<S>> = Vec::with_capacity(f.len());
    for s in f.segments() {
        let mut seg = s.on(s.lo.ceil_tol(), s.hi.floor_tol());
        if seg.hi < seg.lo {
            continue;
        }
        loop {
            let Some(prev) = out.last_mut() else {
                out.push(seg);
                break;
            };
            if prev.hi != seg.lo {
                out.push(seg);
                break;
            }
            let (vp, vs) = (prev.at(prev.hi), seg.at(seg.lo));
            if vp.definitely_lt(vs) {
                seg.lo = seg.lo + one;
                if seg.lo <= seg.hi {
                    out.push(seg);
                }
                break;
            } else if vs.definitely_lt(vp) {
                prev.hi = prev.hi - one;
                if prev.hi < prev.lo {
                    out.pop();
                    continue;
                }
                out.push(seg);
                break;
            } else {
                out.push(seg);
                break;
            }
        }
    }
    let mut b = Builder::new();
    out.into_iter().for_each(|s| b.push(s));
    b.finish()
}
