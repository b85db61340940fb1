//! Closed intervals with rational endpoints, used for certified enclosures.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::rational::BigRational;
use crate::zpoly::ZPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign of every element, or `None` when the interval straddles zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn intersects(&self, o: &RatInterval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn within(&self, lo: &BigRational, hi: &BigRational) -> bool {
        lo <= &self.lo && &self.hi <= hi
    }

    pub fn scale(&self, c: &BigRational) -> RatInterval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            RatInterval::new(a, b)
        } else {
            RatInterval::new(b, a)
        }
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, o: &RatInterval) -> Option<RatInterval> {
        if o.contains_zero() {
            return None;
        }
        let inv = RatInterval::new(o.hi.recip(), o.lo.recip());
        Some(self * &inv)
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, o: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, o: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval::new(-&self.hi, -&self.lo)
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, o: &RatInterval) -> RatInterval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }
}

/// Integer interval, used to run Horner's scheme without rational normalisation.
#[derive(Clone)]
struct IntIv {
    lo: BigInt,
    hi: BigInt,
}

impl IntIv {
    fn point(c: BigInt) -> Self {
        IntIv { lo: c.clone(), hi: c }
    }

    fn mul(&self, o: &IntIv) -> IntIv {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return IntIv { lo: &self.lo * &o.lo, hi: &self.hi * &o.hi };
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        IntIv { lo: c.iter().min().unwrap().clone(), hi: c.iter().max().unwrap().clone() }
    }

    fn add_scalar(mut self, c: &BigInt) -> IntIv {
        self.lo += c;
        self.hi += c;
        self
    }

    fn scale(&self, c: &BigInt) -> IntIv {
        IntIv { lo: &self.lo * c, hi: &self.hi * c }
    }

    fn add(&self, o: &IntIv) -> IntIv {
        IntIv { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn into_rational(self, den: &BigInt) -> RatInterval {
        RatInterval::new(BigRational::new(self.lo, den.clone()), BigRational::new(self.hi, den.clone()))
    }
}

/// `[lo, hi] = [a, b] / d` with a common positive denominator.
fn common_denominator(x: &RatInterval) -> (IntIv, BigInt) {
    let d = num_integer::Integer::lcm(x.lo.denom(), x.hi.denom());
    let a = x.lo.numer() * (&d / x.lo.denom());
    let b = x.hi.numer() * (&d / x.hi.denom());
    (IntIv { lo: a, hi: b }, d)
}

/// Enclosure of `d^n p(X / d)`, `n = deg p`, for `X` in an integer interval.
fn horner_scaled(p: &ZPoly, x: &IntIv, d: &BigInt) -> IntIv {
    let mut acc = IntIv::point(BigInt::zero());
    let mut dpow = BigInt::from(1);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add_scalar(&(c * &dpow));
        dpow *= d;
    }
    acc
}

/// Horner enclosure of an integer polynomial over an interval.
pub fn eval_zpoly(p: &ZPoly, x: &RatInterval) -> RatInterval {
    let Some(n) = p.degree() else {
        return RatInterval::point(BigRational::zero());
    };
    let (xi, d) = common_denominator(x);
    horner_scaled(p, &xi, &d).into_rational(&num_traits::pow(d, n))
}

/// Enclosure of `sum c_ij x^i y^j` over a box, via Horner in `y` of Horner in `x`.
pub fn eval_bivariate(rows: &[ZPoly], x: &RatInterval, y: &RatInterval) -> RatInterval {
    let nx = rows.iter().filter_map(|r| r.degree()).max().unwrap_or(0);
    if rows.iter().all(|r| r.is_zero()) {
        return RatInterval::point(BigRational::zero());
    }
    let (xi, dx) = common_denominator(x);
    let (yi, dy) = common_denominator(y);
    let mut acc = IntIv::point(BigInt::zero());
    let mut dypow = BigInt::from(1);
    for row in rows.iter().rev() {
        let r = match row.degree() {
            Some(n) => horner_scaled(row, &xi, &dx).scale(&num_traits::pow(dx.clone(), nx - n)),
            None => IntIv::point(BigInt::zero()),
        };
        acc = acc.mul(&yi).add(&r.scale(&dypow));
        dypow *= &dy;
    }
    let ny = rows.len() - 1;
    acc.into_rational(&(num_traits::pow(dx, nx) * num_traits::pow(dy, ny)))
}

pub fn int_interval(c: i64) -> RatInterval {
    RatInterval::point(BigRational::from_integer(BigInt::from(c)))
}
