// SPDX-License-Identifier: Apache-2.0
//! Numeric backends shared by every solver.
//!
//! Integral instance data runs on [`Rational`], an exact fraction over `i128`.
//! Everything else runs on `f64` with a relative comparison tolerance of `1e-9`.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Exact rational number used for integral instance data.
pub type Rational = Ratio<i128>;

/// Relative tolerance used by the floating-point backend.
pub const EPS_NUM: f64 = 1e-9;

/// Lossy float conversions land on multiples of `2^-SNAP_BITS`.
const SNAP_BITS: u32 = 30;

/// Largest denominator of a snapped multiplier in exact mode.
pub const SNAP_MAX_DENOM: i128 = 1024;

/// Closest fraction to `x` whose denominator does not exceed `max_den`.
pub fn limit_denominator(x: Rational, max_den: i128) -> Rational {
    if *x.denom() <= max_den {
        return x;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let (mut n, mut d) = (*x.numer(), *x.denom());
    loop {
        let a = n.div_euclid(d);
        let q2 = q0 + a * q1;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p0 + a * p1, q2);
        (n, d) = (d, n - a * d);
        if d == 0 {
            break;
        }
    }
    let k = (max_den - q0) / q1;
    let semi = Ratio::new(p0 + k * p1, q0 + k * q1);
    let conv = Ratio::new(p1, q1);
    if (conv - x).abs() <= (semi - x).abs() {
        conv
    } else {
        semi
    }
}

/// Arithmetic required by the piecewise-linear engine and the solvers.
pub trait Scalar:
    Copy
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when comparisons are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Nearest representable value. Exact for `f64`; rounded to a fine dyadic grid for rationals.
    fn from_f64_lossy(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn floor(self) -> Self;
    fn ceil(self) -> Self;
    /// Value as `i64` when it is an integer (up to tolerance).
    fn to_i64(self) -> Option<i64>;
    /// Snap a search point to the multiplier grid (identity for floats).
    fn snap(self) -> Self;
    fn total_cmp(&self, other: &Self) -> Ordering;

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Comparison slack for the pair `(self, other)`.
    fn tol(self, other: Self) -> Self;

    fn approx_eq(self, other: Self) -> bool {
        (self - other).abs() <= self.tol(other)
    }

    /// `self < other` by more than the tolerance.
    fn definitely_lt(self, other: Self) -> bool {
        self < other && !self.approx_eq(other)
    }

    /// `self <= other` up to the tolerance.
    fn approx_le(self, other: Self) -> bool {
        self <= other || self.approx_eq(other)
    }

    fn floor_tol(self) -> Self {
        let r = self.round_half();
        if r.approx_eq(self) {
            r
        } else {
            self.floor()
        }
    }

    fn ceil_tol(self) -> Self {
        let r = self.round_half();
        if r.approx_eq(self) {
            r
        } else {
            self.ceil()
        }
    }

    fn round_half(self) -> Self {
        let two = Self::from_i64(2);
        (self + Self::one() / two).floor()
    }

    fn is_integral(self) -> bool {
        self.round_half().approx_eq(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_f64_lossy(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn ceil(self) -> Self {
        f64::ceil(self)
    }
    fn to_i64(self) -> Option<i64> {
        if self.is_finite() && self.is_integral() && self.abs() < 9.0e15 {
            Some(self.round() as i64)
        } else {
            None
        }
    }
    fn snap(self) -> Self {
        self
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
    fn tol(self, other: Self) -> Self {
        EPS_NUM * (1.0 + self.abs().max(other.abs()))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        Ratio::from_integer(1)
    }
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
    fn from_f64_lossy(v: f64) -> Self {
        let scale = (1u64 << SNAP_BITS) as f64;
        Ratio::new((v * scale).round() as i128, 1i128 << SNAP_BITS)
    }
    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn floor(self) -> Self {
        Ratio::floor(&self)
    }
    fn ceil(self) -> Self {
        Ratio::ceil(&self)
    }
    fn to_i64(self) -> Option<i64> {
        if self.is_integer() {
            i64::try_from(self.to_integer()).ok()
        } else {
            None
        }
    }
    fn snap(self) -> Self {
        limit_denominator(self, SNAP_MAX_DENOM)
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn tol(self, _other: Self) -> Self {
        Zero::zero()
    }
    fn abs(self) -> Self {
        Signed::abs(&self)
    }
    fn approx_eq(self, other: Self) -> bool {
        self == other
    }
    fn is_integral(self) -> bool {
        self.is_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_tolerance_is_relative() {
        assert!(1.0e9_f64.approx_eq(1.0e9 + 0.5));
        assert!(!1.0_f64.approx_eq(1.0 + 1e-6));
        assert!(0.3_f64.definitely_lt(0.4));
        assert!((0.1_f64 + 0.2).approx_le(0.3));
    }

    #[test]
    fn rational_rounding() {
        let x = Rational::new(7, 3);
        assert_eq!(x.floor_tol(), Rational::from_integer(2));
        assert_eq!(x.ceil_tol(), Rational::from_integer(3));
        assert_eq!(Rational::new(-7, 2).floor_tol(), Rational::from_integer(-4));
        assert!(Rational::from_integer(5).is_integral());
        assert_eq!(Rational::from_integer(-3).to_i64(), Some(-3));
    }

    #[test]
    fn float_rounding_snaps_near_integers() {
        assert_eq!((3.0 - 1e-12_f64).floor_tol(), 3.0);
        assert_eq!((3.0 + 1e-12_f64).ceil_tol(), 3.0);
        assert_eq!(2.5_f64.floor_tol(), 2.0);
        assert_eq!(2.5_f64.ceil_tol(), 3.0);
    }

    #[test]
    fn snapping_bounds_the_denominator() {
        assert_eq!(Rational::new(1, 3).snap(), Rational::new(1, 3));
        let pi = Rational::new(314_159_265_358_979, 100_000_000_000_000);
        assert_eq!(limit_denominator(pi, 10), Rational::new(22, 7));
        assert_eq!(limit_denominator(pi, 1000), Rational::new(355, 113));
        assert_eq!(limit_denominator(-pi, 10), Rational::new(-22, 7));
        let x = Rational::new(123_456_789, 987_654_321).snap();
        assert!(*x.denom() <= SNAP_MAX_DENOM);
        assert!((x.to_f64() - 123_456_789.0 / 987_654_321.0).abs() < 1e-6);
    }
}
