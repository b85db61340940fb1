//! Real algebraic numbers as (square-free integer polynomial, isolating interval).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::interval::{eval_zpoly, RatInterval};
use crate::rational::{format_rational, midpoint, simplest_between, BigRational};
use crate::roots::{isolate_closed, IsolatingInterval};
use crate::unipoly::UniPoly;
use crate::zpoly::ZPoly;

/// A real root of `poly` singled out by `interval`.
///
/// `poly` is square-free and primitive; exactly one of its real roots lies
/// in the interval, and the interval ends are not roots unless `lo == hi`.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    poly: ZPoly,
    interval: IsolatingInterval,
}

impl AlgebraicReal {
    /// Wraps a root of `p` isolated by `interval`; `p` is reduced to its square-free part.
    pub fn new(p: &ZPoly, interval: IsolatingInterval) -> Self {
        let poly = p.square_free_part();
        if interval.is_exact() {
            return AlgebraicReal::from_rational(interval.lo);
        }
        debug_assert!(poly.sign_at(&interval.lo) * poly.sign_at(&interval.hi) < 0);
        AlgebraicReal { poly, interval }
    }

    /// Like [`AlgebraicReal::new`] but trusts that `p` is square-free and primitive.
    pub fn from_squarefree(p: ZPoly, interval: IsolatingInterval) -> Self {
        if interval.is_exact() {
            return AlgebraicReal::from_rational(interval.lo);
        }
        debug_assert!(p.sign_at(&interval.lo) * p.sign_at(&interval.hi) < 0);
        AlgebraicReal { poly: p, interval }
    }

    pub fn from_rational(q: BigRational) -> Self {
        let poly = ZPoly::new(vec![-q.numer().clone(), q.denom().clone()]);
        AlgebraicReal { poly, interval: IsolatingInterval::exact(q) }
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicReal::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn poly(&self) -> &ZPoly {
        &self.poly
    }

    pub fn interval(&self) -> &IsolatingInterval {
        &self.interval
    }

    pub fn enclosure(&self) -> RatInterval {
        RatInterval::new(self.interval.lo.clone(), self.interval.hi.clone())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.interval.is_exact().then_some(&self.interval.lo)
    }

    pub fn approx(&self) -> f64 {
        let a = self.refine(&BigRational::new(BigInt::one(), BigInt::one() << 60));
        midpoint(&a.interval.lo, &a.interval.hi).to_f64().unwrap_or(f64::NAN)
    }

    /// Looks for a rational value of small height by testing the simplest
    /// rational of the interval over a few bisections; switches to the
    /// exact representation when one is found.
    pub fn try_rationalize(&mut self, rounds: usize) {
        for _ in 0..rounds {
            if self.interval.is_exact() {
                return;
            }
            let c = simplest_between(&self.interval.lo, &self.interval.hi);
            if self.poly.sign_at(&c) == 0 {
                *self = AlgebraicReal::from_rational(c);
                return;
            }
            self.bisect();
        }
    }

    /// One bisection step.
    pub fn bisect(&mut self) {
        if self.interval.is_exact() {
            return;
        }
        let m = midpoint(&self.interval.lo, &self.interval.hi);
        let sm = self.poly.sign_at(&m);
        if sm == 0 {
            *self = AlgebraicReal::from_rational(m);
            return;
        }
        if self.poly.sign_at(&self.interval.lo) * sm < 0 {
            self.interval.hi = m;
        } else {
            self.interval.lo = m;
        }
    }

    /// Same root, interval no wider than `width`.
    pub fn refine(&self, width: &BigRational) -> AlgebraicReal {
        assert!(width > &BigRational::zero(), "refinement width must be positive");
        let mut a = self.clone();
        a.refine_in_place(width);
        a
    }

    pub fn refine_in_place(&mut self, width: &BigRational) {
        while !self.interval.is_exact() && &self.interval.width() > width {
            self.bisect();
        }
    }

    /// Whether this number is a root of `q`, decided through gcds (never numerically).
    pub fn is_root_of(&self, q: &ZPoly) -> bool {
        if q.is_zero() {
            return true;
        }
        if let Some(r) = self.as_rational() {
            return q.sign_at(r) == 0;
        }
        let g = self.poly.gcd(q);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        // g divides the defining polynomial, so its roots are simple and lie
        // among ours; it vanishes here iff it changes sign across the interval.
        g.sign_at(&self.interval.lo) * g.sign_at(&self.interval.hi) < 0
    }

    /// Exact sign of `q` at this number.
    pub fn sign_of_zpoly(&self, q: &ZPoly) -> i32 {
        if let Some(r) = self.as_rational() {
            return q.sign_at(r);
        }
        if q.is_zero() || self.is_root_of(q) {
            return 0;
        }
        let mut a = self.clone();
        loop {
            if let Some(s) = eval_zpoly(q, &a.enclosure()).sign() {
                return s;
            }
            a.bisect();
            if let Some(r) = a.as_rational() {
                return q.sign_at(r);
            }
        }
    }

    pub fn sign_at(&self, p: &UniPoly) -> i32 {
        if p.is_zero() {
            return 0;
        }
        self.sign_of_zpoly(&p.to_zpoly())
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        if let Some(r) = self.as_rational() {
            return r.cmp(q);
        }
        if q <= &self.interval.lo {
            return Ordering::Greater;
        }
        if q >= &self.interval.hi {
            return Ordering::Less;
        }
        if self.poly.sign_at(q) == 0 {
            // q is a root inside the isolating interval, hence our root.
            return Ordering::Equal;
        }
        let mut a = self.clone();
        while a.interval.contains(q) && !a.interval.is_exact() {
            a.bisect();
        }
        a.cmp_rational(q)
    }

    /// Index of this number among the sorted roots of `g` in `roots`.
    fn index_among(&self, roots: &[IsolatingInterval]) -> Option<usize> {
        let mut a = self.clone();
        loop {
            let hits: Vec<usize> = roots
                .iter()
                .enumerate()
                .filter(|(_, r)| r.intersects(&a.interval))
                .map(|(i, _)| i)
                .collect();
            match hits.len() {
                0 => return None,
                1 => return Some(hits[0]),
                _ => {
                    if a.interval.is_exact() {
                        // Exact value on a shared endpoint; pick the interval holding it as a root.
                        return hits.into_iter().find(|&i| roots[i].is_exact() && roots[i].lo == a.interval.lo);
                    }
                    a.bisect();
                }
            }
        }
    }

    /// Exact equality via a common factor of the defining polynomials.
    pub fn equals(&self, other: &AlgebraicReal) -> bool {
        if !self.interval.intersects(&other.interval) {
            return false;
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => return a == b,
            (Some(a), None) => return other.cmp_rational(a) == Ordering::Equal,
            (None, Some(b)) => return self.cmp_rational(b) == Ordering::Equal,
            _ => {}
        }
        let g = self.poly.gcd(&other.poly);
        if g.degree().unwrap_or(0) == 0 || !self.is_root_of(&g) || !other.is_root_of(&g) {
            return false;
        }
        let lo = std::cmp::min(&self.interval.lo, &other.interval.lo).clone();
        let hi = std::cmp::max(&self.interval.hi, &other.interval.hi).clone();
        let roots = isolate_closed(&g, &lo, &hi);
        self.index_among(&roots) == other.index_among(&roots)
    }

    pub fn cmp_exact(&self, other: &AlgebraicReal) -> Ordering {
        if self.equals(other) {
            return Ordering::Equal;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.interval.hi < b.interval.lo {
                return Ordering::Less;
            }
            if b.interval.hi < a.interval.lo {
                return Ordering::Greater;
            }
            if a.interval.is_exact() && b.interval.is_exact() {
                return a.interval.lo.cmp(&b.interval.lo);
            }
            if a.interval.width() >= b.interval.width() {
                a.bisect();
            } else {
                b.bisect();
            }
        }
    }
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{}", format_rational(r)),
            None => write!(f, "root of {} in ({}, {}) ~ {:.6}",
                UniPoly::from_zpoly(&self.poly),
                format_rational(&self.interval.lo),
                format_rational(&self.interval.hi),
                self.approx()),
        }
    }
}

#[derive(Serialize)]
struct AlgebraicJson {
    poly: Vec<String>,
    lo: String,
    hi: String,
    approx: f64,
}

impl Serialize for AlgebraicReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlgebraicJson {
            poly: self.poly.coeffs().iter().map(|c| c.to_string()).collect(),
            lo: format_rational(&self.interval.lo),
            hi: format_rational(&self.interval.hi),
            approx: self.approx(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn sqrt2() -> AlgebraicReal {
        AlgebraicReal::new(&ZPoly::from_i64(&[-2, 0, 1]), IsolatingInterval::new(int(1), int(2)))
    }

    /// Bisection oracle: the interval after `n` halvings of (1,2) around sqrt(2).
    fn bisection_oracle(n: usize) -> (BigRational, BigRational) {
        let (mut lo, mut hi) = (int(1), int(2));
        for _ in 0..n {
            let m = midpoint(&lo, &hi);
            if &m * &m < int(2) {
                lo = m;
            } else {
                hi = m;
            }
        }
        (lo, hi)
    }

    #[test]
    fn refine_sqrt_two() {
        let a = sqrt2().refine(&rat(1, 8));
        assert!(a.interval().width() <= rat(1, 8));
        let (lo, hi) = bisection_oracle(3);
        assert_eq!((a.interval().lo.clone(), a.interval().hi.clone()), (lo, hi));
        // 1.41421... stays inside
        assert!(a.interval().contains(&rat(141421, 100000)));
        // idempotent
        let b = a.refine(&rat(1, 8));
        assert_eq!(a.interval(), b.interval());
        // already narrow enough
        assert_eq!(sqrt2().refine(&int(2)).interval(), sqrt2().interval());
    }

    #[test]
    fn exact_roots_unchanged() {
        let h = AlgebraicReal::from_rational(rat(1, 2));
        assert_eq!(h.refine(&rat(1, 1000)).interval(), &IsolatingInterval::exact(rat(1, 2)));
    }

    #[test]
    fn signs() {
        let a = sqrt2();
        assert_eq!(a.sign_at(&UniPoly::from_i64(&[-1, 1])), 1);
        assert_eq!(a.sign_at(&UniPoly::from_i64(&[-2, 0, 1])), 0);
        assert_eq!(a.sign_at(&UniPoly::from_i64(&[-3, 0, 2])), 1);
        // (x^2 - 2)(x - 5) vanishes at sqrt 2 as well
        assert_eq!(a.sign_at(&UniPoly::from_i64(&[10, -2, -5, 1])), 0);
        let third = AlgebraicReal::from_rational(rat(1, 3));
        assert_eq!(third.sign_at(&UniPoly::from_i64(&[-1, 2])), -1);
    }

    #[test]
    fn comparisons() {
        let a = sqrt2();
        // same number, different defining data: x^4 - 4 on (1, 3/2)
        let b = AlgebraicReal::new(&ZPoly::from_i64(&[-4, 0, 0, 0, 1]), IsolatingInterval::new(int(1), rat(3, 2)));
        assert!(a.equals(&b));
        let c = AlgebraicReal::new(&ZPoly::from_i64(&[-3, 0, 1]), IsolatingInterval::new(int(1), int(2)));
        assert_eq!(a.cmp_exact(&c), Ordering::Less);
        assert_eq!(a.cmp_rational(&rat(7, 5)), Ordering::Greater);
        assert_eq!(AlgebraicReal::from_int(3).cmp_rational(&int(3)), Ordering::Equal);
    }

    proptest! {
        #[test]
        fn refinement_keeps_the_root(n in 2i64..200, k in 1u32..40) {
            // sqrt(n) for non-squares
            let r = (n as f64).sqrt().floor() as i64;
            prop_assume!(r * r != n);
            let a = AlgebraicReal::new(&ZPoly::from_i64(&[-n, 0, 1]), IsolatingInterval::new(int(r), int(r + 1)));
            let w = BigRational::new(1.into(), BigInt::from(2u64).pow(k));
            let b = a.refine(&w);
            prop_assert!(b.equals(&a));
            prop_assert!(&b.interval().lo * &b.interval().lo < int(n));
            prop_assert!(&b.interval().hi * &b.interval().hi > int(n));
            prop_assert_eq!(b.sign_of_zpoly(&ZPoly::from_i64(&[-n, 0, 1])), 0);
        }
    }
}
