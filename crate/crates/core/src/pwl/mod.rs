// SPDX-License-Identifier: Apache-2.0
//! Piecewise-linear functions over a load axis.
//!
//! A [`PwlFunction`] is an ordered list of closed [`Segment`]s. Neighbouring
//! segments may touch at a border or leave a gap, but never overlap. Where
//! several segments contain a point, the function value is the smallest of
//! them, which gives lower semicontinuity at jumps.

mod builder;
mod envelope;
mod integerize;
mod superpose;
mod sweep;

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) use builder::Builder;
pub use envelope::envelope;
pub use superpose::superpose;

/// Sentinel for [`Tag::source`] when a segment has no predecessor.
pub const NO_SOURCE: u32 = u32::MAX;

/// How the inventory change at a node is recovered from a value-function segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Transfer<S> {
    /// No transfer recorded.
    None,
    /// The transfer is this constant.
    Fixed(S),
    /// The transfer is `q - anchor` for the load `q` at which the segment is evaluated.
    FromLoad(S),
}

impl<S: Scalar> Transfer<S> {
    pub fn resolve(&self, q: S) -> Option<S> {
        match *self {
            Transfer::None => None,
            Transfer::Fixed(y) => Some(y),
            Transfer::FromLoad(a) => Some(q - a),
        }
    }

    fn translated(self, dx: S) -> Self {
        match self {
            Transfer::FromLoad(a) => Transfer::FromLoad(a + dx),
            other => other,
        }
    }
}

/// Back-pointer carried by every segment for solution reconstruction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tag<S> {
    /// Predecessor node, or [`NO_SOURCE`].
    pub source: u32,
    /// Budget layer of the predecessor (duration-indexed tables only).
    pub layer: u32,
    pub transfer: Transfer<S>,
}

impl<S> Tag<S> {
    pub const fn none() -> Self {
        Tag {
            source: NO_SOURCE,
            layer: 0,
            transfer: Transfer::None,
        }
    }
}

/// Linear piece `slope * q + intercept` on the closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment<S> {
    pub slope: S,
    pub intercept: S,
    pub lo: S,
    pub hi: S,
    pub tag: Tag<S>,
}

impl<S: Scalar> Segment<S> {
    pub fn new(slope: S, intercept: S, lo: S, hi: S) -> Self {
        Segment {
            slope,
            intercept,
            lo,
            hi,
            tag: Tag::none(),
        }
    }

    /// The segment joining `(x0, y0)` and `(x1, y1)`; a point when `x0 == x1`.
    pub fn through(x0: S, y0: S, x1: S, y1: S) -> Self {
        if x0 == x1 {
            Segment::new(S::zero(), y0, x0, x0)
        } else {
            let slope = (y1 - y0) / (x1 - x0);
            Segment::new(slope, y0 - slope * x0, x0, x1)
        }
    }

    pub fn point(x: S, value: S) -> Self {
        Segment::new(S::zero(), value, x, x)
    }

    pub fn with_tag(mut self, tag: Tag<S>) -> Self {
        self.tag = tag;
        self
    }

    #[inline]
    pub fn at(&self, q: S) -> S {
        self.slope * q + self.intercept
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Membership test with the backend tolerance at both borders.
    pub fn contains(&self, q: S) -> bool {
        self.lo.approx_le(q) && q.approx_le(self.hi)
    }

    pub fn same_line(&self, other: &Self) -> bool {
        self.slope == other.slope && self.intercept == other.intercept
    }

    /// The same line on `[lo, hi]`, keeping the tag.
    pub fn on(&self, lo: S, hi: S) -> Self {
        Segment { lo, hi, ..*self }
    }
}

/// Ordered, non-overlapping sequence of segments.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PwlFunction<S> {
    segments: Vec<Segment<S>>,
}

impl<S: Scalar> PwlFunction<S> {
    pub fn empty() -> Self {
        PwlFunction {
            segments: Vec::new(),
        }
    }

    /// Build from segments, checking `lo <= hi` and the ordering of neighbours.
    ///
    /// Point segments are stored with slope zero.
    pub fn new(mut segments: Vec<Segment<S>>) -> Result<Self> {
        for s in segments.iter_mut().filter(|s| s.is_point() && s.slope != S::zero()) {
            s.intercept = s.at(s.lo);
            s.slope = S::zero();
        }
        for (k, s) in segments.iter().enumerate() {
            if s.hi < s.lo {
                return Err(Error::InvalidFunction(format!(
                    "segment {k} has hi {} < lo {}",
                    s.hi, s.lo
                )));
            }
            if k > 0 && s.lo < segments[k - 1].hi {
                return Err(Error::InvalidFunction(format!(
                    "segment {k} starts at {} before the previous one ends at {}",
                    s.lo,
                    segments[k - 1].hi
                )));
            }
        }
        Ok(PwlFunction { segments })
    }

    pub(crate) fn from_sorted(segments: Vec<Segment<S>>) -> Self {
        debug_assert!(PwlFunction::new(segments.clone()).is_ok());
        PwlFunction { segments }
    }

    /// Linear interpolation between consecutive breakpoints.
    ///
    /// Repeating an abscissa encodes a jump; the smaller value wins at the jump.
    pub fn from_breakpoints(points: &[(S, S)]) -> Result<Self> {
        match points {
            [] => Err(Error::InvalidFunction("no breakpoints".into())),
            [(x, y)] => Ok(PwlFunction {
                segments: vec![Segment::point(*x, *y)],
            }),
            _ => {
                let mut segments = Vec::with_capacity(points.len() - 1);
                for w in points.windows(2) {
                    let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                    if x1 < x0 {
                        return Err(Error::InvalidFunction(format!(
                            "breakpoints not sorted: {x1} after {x0}"
                        )));
                    }
                    if x1 > x0 {
                        segments.push(Segment::through(x0, y0, x1, y1));
                    }
                }
                if segments.is_empty() {
                    let best = points
                        .iter()
                        .map(|p| p.1)
                        .fold(points[0].1, |a, b| a.min_of(b));
                    segments.push(Segment::point(points[0].0, best));
                }
                Ok(PwlFunction { segments })
            }
        }
    }

    pub fn segments(&self) -> &[Segment<S>] {
        &self.segments
    }

    pub fn into_segments(self) -> Vec<Segment<S>> {
        self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Smallest and largest point of the domain.
    pub fn bounds(&self) -> Option<(S, S)> {
        Some((self.segments.first()?.lo, self.segments.last()?.hi))
    }

    /// Index of the first segment whose `hi` is not definitely below `q`.
    fn first_candidate(&self, q: S) -> usize {
        self.segments.partition_point(|s| s.hi.definitely_lt(q))
    }

    /// Index of the segment attaining the minimum at `q`; ties go to the earliest one.
    pub fn locate(&self, q: S) -> Option<usize> {
        let mut best: Option<(usize, S)> = None;
        for k in self.first_candidate(q)..self.segments.len() {
            let s = &self.segments[k];
            if q.definitely_lt(s.lo) {
                break;
            }
            let v = s.at(q);
            if best.is_none_or(|(_, b)| v.definitely_lt(b)) {
                best = Some((k, v));
            }
        }
        best.map(|(k, _)| k)
    }

    /// Value at `q`, or `None` outside the domain.
    pub fn evaluate(&self, q: S) -> Option<S> {
        self.locate(q).map(|k| self.segments[k].at(q))
    }

    pub fn shift(&self, c: S) -> Self {
        self.map_segments(|s| Segment {
            intercept: s.intercept + c,
            ..*s
        })
    }

    /// `g(q) = f(q - dx)`: the graph moved right by `dx`.
    pub fn translate(&self, dx: S) -> Self {
        self.map_segments(|s| Segment {
            intercept: s.intercept - s.slope * dx,
            lo: s.lo + dx,
            hi: s.hi + dx,
            tag: Tag {
                transfer: s.tag.transfer.translated(dx),
                ..s.tag
            },
            ..*s
        })
    }

    /// Add `slope * q + c` to every segment.
    pub fn add_linear(&self, slope: S, c: S) -> Self {
        self.map_segments(|s| Segment {
            slope: s.slope + slope,
            intercept: s.intercept + c,
            ..*s
        })
    }

    /// The restriction to `[lo, hi]`.
    pub fn restrict(&self, lo: S, hi: S) -> Self {
        let mut out = Builder::new();
        for s in &self.segments {
            if s.hi.definitely_lt(lo) || hi.definitely_lt(s.lo) {
                continue;
            }
            let a = if s.lo < lo { lo } else { s.lo };
            let b = if s.hi > hi { hi } else { s.hi };
            if b < a {
                if a.approx_eq(b) {
                    out.push(s.on(a, a));
                }
                continue;
            }
            out.push(s.on(a, b));
        }
        out.finish()
    }

    pub fn map_tags(&self, f: impl Fn(&Tag<S>) -> Tag<S>) -> Self {
        self.map_segments(|s| Segment { tag: f(&s.tag), ..*s })
    }

    fn map_segments(&self, f: impl Fn(&Segment<S>) -> Segment<S>) -> Self {
        PwlFunction {
            segments: self.segments.iter().map(f).collect(),
        }
    }

    /// Minimum value and the smallest load attaining it.
    pub fn min_value(&self) -> Option<(S, S)> {
        let mut best: Option<(S, S)> = None;
        for s in &self.segments {
            for q in [s.lo, s.hi] {
                let v = s.at(q);
                match best {
                    Some((bq, bv)) if !(v.definitely_lt(bv) || (v.approx_eq(bv) && q < bq)) => {}
                    _ => best = Some((q, v)),
                }
            }
        }
        best
    }

    /// Breakpoint list `(x, value)` describing a gap-free function; `None` if the domain has holes.
    pub fn breakpoints(&self) -> Option<Vec<(S, S)>> {
        let first = self.segments.first()?;
        let mut pts = vec![(first.lo, first.at(first.lo))];
        for (k, s) in self.segments.iter().enumerate() {
            if k > 0 {
                let prev = &self.segments[k - 1];
                if !prev.hi.approx_eq(s.lo) {
                    return None;
                }
                let v = s.at(s.lo);
                if !v.approx_eq(pts.last().unwrap().1) {
                    pts.push((s.lo, v));
                }
            }
            if !s.is_point() {
                pts.push((s.hi, s.at(s.hi)));
            }
        }
        Some(pts)
    }

    /// True when the domain is one interval and values agree at every shared border.
    pub fn is_continuous(&self) -> bool {
        self.segments.windows(2).all(|w| {
            w[0].hi.approx_eq(w[1].lo) && w[0].at(w[0].hi).approx_eq(w[1].at(w[1].lo))
        })
    }

    /// True when `q1 < q2` implies `f(q1) <= f(q2)` on the domain.
    pub fn is_nondecreasing(&self) -> bool {
        self.segments
            .iter()
            .all(|s| s.is_point() || S::zero().approx_le(s.slope) || s.lo.approx_eq(s.hi))
            && self
                .segments
                .windows(2)
                .all(|w| w[0].at(w[0].hi).approx_le(w[1].at(w[1].lo)))
    }

    /// True when every border is an integer.
    pub fn has_integer_borders(&self) -> bool {
        self.segments
            .iter()
            .all(|s| s.lo.is_integral() && s.hi.is_integral())
    }

    /// True when `self` is defined wherever `other` is, with `self <= other` there.
    pub fn dominates(&self, other: &Self) -> bool {
        sweep::dominates(self, other)
    }

    /// Integer-bordered restriction keeping every integer point of the domain.
    pub fn integerize(&self) -> Self {
        integerize::integerize(self)
    }
}

impl<S: Scalar> fmt::Display for PwlFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segments.is_empty() {
            return write!(f, "{{}}");
        }
        for (k, s) in self.segments.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}q{:+} on [{}, {}]", s.slope, s.intercept, s.lo, s.hi)?;
        }
        Ok(())
    }
}
