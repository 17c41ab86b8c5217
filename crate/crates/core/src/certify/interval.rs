//! Real intervals and complex boxes with outward rounding.
//!
//! Rounding is portable: every bound is pushed one ulp outward after each
//! basic operation (two ulps after `ln`, `sqrt` and `atan2`), so no
//! rounding-mode control is needed and concurrent use is safe.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("logarithm of a box containing zero")]
    LogOfZero,
    #[error("box crosses the branch cut of the logarithm")]
    BranchCut,
    #[error("square root of a negative interval")]
    NegativeSqrt,
}

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Interval {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    /// Smallest interval holding the real number nearest `x` after one
    /// rounding, i.e. `[x⁻, x⁺]`.
    pub fn around(x: f64) -> Interval {
        Interval { lo: down(x), hi: up(x) }
    }

    /// `[−r, r]`
    pub fn symmetric(r: f64) -> Interval {
        Interval { lo: -r, hi: r }
    }

    /// π, enclosed.
    pub fn pi() -> Interval {
        Interval::around(std::f64::consts::PI)
    }

    pub fn mid(self) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            0.5 * self.lo + 0.5 * self.hi
        }
    }

    pub fn width(self) -> f64 {
        up(self.hi - self.lo)
    }

    pub fn radius(self) -> f64 {
        up(0.5 * (self.hi - self.lo))
    }

    /// Largest absolute value in the interval.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn encloses(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn interior_contains(self, other: Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn overlaps(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Widens both ends by `r` (rounded outward).
    pub fn inflate(self, r: f64) -> Interval {
        Interval { lo: down(self.lo - r), hi: up(self.hi + r) }
    }

    pub fn sqr(self) -> Interval {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.contains_zero() {
            Interval { lo: 0.0, hi: up(a.max(b)) }
        } else {
            Interval { lo: down(a.min(b)).max(0.0), hi: up(a.max(b)) }
        }
    }

    pub fn recip(self) -> Result<Interval, IntervalError> {
        if self.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        Ok(Interval { lo: down(1.0 / self.hi), hi: up(1.0 / self.lo) })
    }

    pub fn div(self, other: Interval) -> Result<Interval, IntervalError> {
        if other.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let q = [self.lo / other.lo, self.lo / other.hi, self.hi / other.lo, self.hi / other.hi];
        Ok(bounds(q))
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::NegativeSqrt);
        }
        Ok(Interval { lo: down(down(self.lo.sqrt())).max(0.0), hi: up(up(self.hi.sqrt())) })
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(self) -> Result<Interval, IntervalError> {
        if self.lo <= 0.0 {
            return Err(IntervalError::LogOfZero);
        }
        Ok(Interval { lo: down(down(self.lo.ln())), hi: up(up(self.hi.ln())) })
    }

    pub fn scale(self, k: f64) -> Interval {
        self * Interval::point(k)
    }
}

fn bounds(v: [f64; 4]) -> Interval {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Interval { lo: down(lo), hi: up(hi) }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo + o.lo), hi: up(self.hi + o.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo - o.hi), hi: up(self.hi - o.lo) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        bounds([self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi])
    }
}

/// Rectangle in ℂ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub const ZERO: ComplexBox = ComplexBox { re: Interval::ZERO, im: Interval::ZERO };
    pub const ONE: ComplexBox = ComplexBox { re: Interval::ONE, im: Interval::ZERO };

    pub fn new(re: Interval, im: Interval) -> ComplexBox {
        ComplexBox { re, im }
    }

    pub fn point(re: f64, im: f64) -> ComplexBox {
        ComplexBox { re: Interval::point(re), im: Interval::point(im) }
    }

    pub fn real(x: Interval) -> ComplexBox {
        ComplexBox { re: x, im: Interval::ZERO }
    }

    /// Square box of half-width `r` about (re, im).
    pub fn centered(re: f64, im: f64, r: f64) -> ComplexBox {
        ComplexBox { re: Interval::point(re).inflate(r), im: Interval::point(im).inflate(r) }
    }

    pub fn mid(self) -> (f64, f64) {
        (self.re.mid(), self.im.mid())
    }

    pub fn contains(self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0, 0.0)
    }

    pub fn encloses(self, o: ComplexBox) -> bool {
        self.re.encloses(o.re) && self.im.encloses(o.im)
    }

    pub fn interior_contains(self, o: ComplexBox) -> bool {
        self.re.interior_contains(o.re) && self.im.interior_contains(o.im)
    }

    pub fn overlaps(self, o: ComplexBox) -> bool {
        self.re.overlaps(o.re) && self.im.overlaps(o.im)
    }

    pub fn inflate(self, r: f64) -> ComplexBox {
        ComplexBox { re: self.re.inflate(r), im: self.im.inflate(r) }
    }

    /// Scales the box about its centre by `1 + t` in each direction.
    pub fn inflate_relative(self, t: f64) -> ComplexBox {
        ComplexBox { re: self.re.inflate(up(self.re.radius() * t)), im: self.im.inflate(up(self.im.radius() * t)) }
    }

    pub fn hull(self, o: ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re.hull(o.re), im: self.im.hull(o.im) }
    }

    /// Largest modulus over the box, rounded up.
    pub fn mag(self) -> f64 {
        (self.re.sqr() + self.im.sqr()).sqrt().map(|s| s.hi).unwrap_or(f64::INFINITY)
    }

    pub fn norm_sqr(self) -> Interval {
        self.re.sqr() + self.im.sqr()
    }

    pub fn conj(self) -> ComplexBox {
        ComplexBox { re: self.re, im: -self.im }
    }

    pub fn scale(self, k: Interval) -> ComplexBox {
        ComplexBox { re: self.re * k, im: self.im * k }
    }

    /// conj(z) / |z|²
    pub fn recip(self) -> Result<ComplexBox, IntervalError> {
        let n = self.norm_sqr();
        if n.lo <= 0.0 {
            return Err(IntervalError::DivisionByZero);
        }
        Ok(ComplexBox { re: self.re.div(n)?, im: (-self.im).div(n)? })
    }

    pub fn div(self, o: ComplexBox) -> Result<ComplexBox, IntervalError> {
        Ok(self * o.recip()?)
    }

    /// 1 / (1 − z)
    pub fn recip_one_minus(self) -> Result<ComplexBox, IntervalError> {
        (ComplexBox::ONE - self).recip()
    }

    /// Principal argument. Fails if the box contains 0 or meets the
    /// negative real axis.
    pub fn arg(self) -> Result<Interval, IntervalError> {
        if self.contains_zero() {
            return Err(IntervalError::LogOfZero);
        }
        if self.re.lo <= 0.0 && self.im.contains_zero() {
            return Err(IntervalError::BranchCut);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for x in [self.re.lo, self.re.hi] {
            for y in [self.im.lo, self.im.hi] {
                let a = y.atan2(x);
                lo = lo.min(a);
                hi = hi.max(a);
            }
        }
        Ok(Interval { lo: down(down(lo)), hi: up(up(hi)) })
    }

    /// Principal logarithm ln|z| + i arg z.
    pub fn ln(self) -> Result<ComplexBox, IntervalError> {
        let arg = self.arg()?;
        let modulus = self.norm_sqr().ln()?.scale(0.5);
        Ok(ComplexBox { re: modulus, im: arg })
    }
}

impl Add for ComplexBox {
    type Output = ComplexBox;
    fn add(self, o: ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for ComplexBox {
    type Output = ComplexBox;
    fn sub(self, o: ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for ComplexBox {
    type Output = ComplexBox;
    fn neg(self) -> ComplexBox {
        ComplexBox { re: -self.re, im: -self.im }
    }
}

impl Mul for ComplexBox {
    type Output = ComplexBox;
    fn mul(self, o: ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn widened(z: Complex64) -> ComplexBox {
        ComplexBox::new(Interval::around(z.re), Interval::around(z.im))
    }

    fn holds(b: ComplexBox, z: Complex64) -> bool {
        b.contains(z.re, z.im)
    }

    #[test]
    fn basic_enclosures() {
        let third = Interval::ONE.div(Interval::point(3.0)).unwrap();
        assert!(third.lo < third.hi);
        assert!(third.contains(1.0 / 3.0));
        assert!(Interval::point(2.0).ln().unwrap().contains(std::f64::consts::LN_2));
        assert!(Interval::new(-1.0, 2.0).sqr().lo == 0.0);
    }

    #[test]
    fn log_errors() {
        assert_eq!(ComplexBox::centered(0.0, 0.0, 1e-3).ln(), Err(IntervalError::LogOfZero));
        assert_eq!(ComplexBox::centered(-1.0, 0.0, 1e-3).ln(), Err(IntervalError::BranchCut));
        let one = ComplexBox::centered(1.0, 0.0, 1e-9);
        assert_eq!(one.recip_one_minus(), Err(IntervalError::DivisionByZero));
    }

    #[test]
    fn inflating_input_never_shrinks_output() {
        let z = ComplexBox::centered(0.3, 0.8, 1e-6);
        let big = z.inflate(1e-3);
        assert!(big.ln().unwrap().encloses(z.ln().unwrap()));
        assert!(big.recip().unwrap().encloses(z.recip().unwrap()));
        assert!((big * big).encloses(z * z));
        assert!(big.recip_one_minus().unwrap().encloses(z.recip_one_minus().unwrap()));
    }

    fn upper() -> impl Strategy<Value = Complex64> {
        (-3.0f64..3.0, 0.01f64..3.0).prop_map(|(a, b)| Complex64::new(a, b))
    }

    proptest! {
        #[test]
        fn ops_contain_float_results(a in upper(), b in upper()) {
            let (x, y) = (widened(a), widened(b));
            prop_assert!(holds(x + y, a + b));
            prop_assert!(holds(x - y, a - b));
            prop_assert!(holds(x * y, a * b));
            prop_assert!(holds(x.div(y).unwrap(), a / b));
            prop_assert!(holds(x.ln().unwrap(), a.ln()));
            prop_assert!(holds(x.recip_one_minus().unwrap(), 1.0 / (1.0 - a)));
        }
    }
}
