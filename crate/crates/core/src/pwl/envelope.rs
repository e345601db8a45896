// SPDX-License-Identifier: Apache-2.0
use std::cmp::Ordering;

use super::sweep::{borders, Cover};
use super::{Builder, PwlFunction, Segment};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pointwise minimum of `fs` over the union of their domains.
///
/// Inputs are merged pairwise level by level. Where two inputs tie over an
/// interval the earlier one is kept.
pub fn envelope<S: Scalar>(fs: &[PwlFunction<S>]) -> Result<PwlFunction<S>> {
    match fs {
        [] => Err(Error::EmptyEnvelope),
        [single] => Ok(single.clone()),
        _ => {
            let mut level: Vec<PwlFunction<S>> = fs
                .chunks(2)
                .map(|c| match c {
                    [a, b] => merge_pair(a, b),
                    [a] => a.clone(),
                    _ => unreachable!(),
                })
                .collect();
            while level.len() > 1 {
                let mut next = Vec::with_capacity(level.len().div_ceil(2));
                let mut it = level.into_iter();
                while let Some(a) = it.next() {
                    next.push(match it.next() {
                        Some(b) => merge_pair(&a, &b),
                        None => a,
                    });
                }
                level = next;
            }
            Ok(level.pop().expect("non-empty level"))
        }
    }
}

/// Sign of `a - b` with the backend tolerance, as an ordering of `a` against `b`.
fn compare<S: Scalar>(a: S, b: S) -> Ordering {
    if a.approx_eq(b) {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Envelope of two functions; ties favour `f`.
pub(crate) fn merge_pair<S: Scalar>(f: &PwlFunction<S>, g: &PwlFunction<S>) -> PwlFunction<S> {
    if g.is_empty() {
        return f.clone();
    }
    if f.is_empty() {
        return g.clone();
    }
    let xs = borders(&[f, g]);
    let (mut cf, mut cg) = (Cover::new(f), Cover::new(g));
    let mut out = Builder::new();
    for (k, &x) in xs.iter().enumerate() {
        let best = match (cf.at_point(x), cg.at_point(x)) {
            (Some((sf, vf)), Some((sg, vg))) => Some(if vg.definitely_lt(vf) { sg } else { sf }),
            (Some((sf, _)), None) => Some(sf),
            (None, Some((sg, _))) => Some(sg),
            (None, None) => None,
        };
        if let Some(s) = best {
            out.push(s.on(x, x));
        }
        let Some(&b) = xs.get(k + 1) else { break };
        match (cf.over(x, b), cg.over(x, b)) {
            (Some(sf), None) => out.push(sf.on(x, b)),
            (None, Some(sg)) => out.push(sg.on(x, b)),
            (Some(sf), Some(sg)) => push_min_of_two(&mut out, sf, sg, x, b),
            (None, None) => {}
        }
    }
    out.finish()
}

fn push_min_of_two<S: Scalar>(out: &mut Builder<S>, sf: &Segment<S>, sg: &Segment<S>, a: S, b: S) {
    use Ordering::*;
    let left = compare(sf.at(a), sg.at(a));
    let right = compare(sf.at(b), sg.at(b));
    match (left, right) {
        (Less | Equal, Less | Equal) => out.push(sf.on(a, b)),
        (Greater | Equal, Greater | Equal) => out.push(sg.on(a, b)),
        (first, _) => {
            let (lower_left, lower_right) = if first == Less { (sf, sg) } else { (sg, sf) };
            let mut x = (sg.intercept - sf.intercept) / (sf.slope - sg.slope);
            if x < a {
                x = a;
            }
            if x > b {
                x = b;
            }
            out.push(lower_left.on(a, x));
            out.push(lower_right.on(x, b));
        }
    }
}
