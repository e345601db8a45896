// SPDX-License-Identifier: Apache-2.0
use super::{PwlFunction, Segment};
use crate::scalar::Scalar;

/// Accumulates pieces in increasing load order into a normalized function.
///
/// Contiguous pieces on the same line with the same tag are fused, and point
/// pieces that a neighbour already matches or beats are dropped.
pub(crate) struct Builder<S> {
    out: Vec<Segment<S>>,
}

impl<S: Scalar> Builder<S> {
    pub(crate) fn new() -> Self {
        Builder { out: Vec::new() }
    }

    pub(crate) fn push(&mut self, mut seg: Segment<S>) {
        if let Some(last) = self.out.last() {
            if seg.lo < last.hi {
                // Only rounding noise can get here; inputs are produced in order.
                debug_assert!(seg.lo.approx_eq(last.hi));
                seg.lo = last.hi;
                if seg.hi < seg.lo {
                    seg.hi = seg.lo;
                }
            }
        }
        if seg.is_point() {
            self.push_point(seg);
        } else {
            self.push_piece(seg);
        }
    }

    fn push_point(&mut self, p: Segment<S>) {
        let x = p.lo;
        let v = p.at(x);
        while let Some(last) = self.out.last() {
            if last.hi.approx_eq(x) && last.at(x).approx_le(v) {
                return;
            }
            if last.is_point() && last.lo.approx_eq(x) {
                self.out.pop();
            } else {
                break;
            }
        }
        self.out.push(p);
    }

    fn push_piece(&mut self, seg: Segment<S>) {
        let v = seg.at(seg.lo);
        while let Some(last) = self.out.last() {
            if last.is_point() && last.lo.approx_eq(seg.lo) && v.approx_le(last.at(last.lo)) {
                self.out.pop();
            } else {
                break;
            }
        }
        if let Some(last) = self.out.last_mut() {
            if !last.is_point() && last.hi == seg.lo && last.same_line(&seg) && last.tag == seg.tag {
                last.hi = seg.hi;
                return;
            }
        }
        self.out.push(seg);
    }

    pub(crate) fn finish(self) -> PwlFunction<S> {
        PwlFunction::from_sorted(self.out)
    }
}
