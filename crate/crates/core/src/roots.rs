//! Real root isolation for univariate polynomials.
//!
//! Isolation uses Descartes' rule of signs with bisection on integer
//! polynomials (Vincent-Collins-Akritas). A Sturm-sequence root counter is
//! kept alongside as an independent check.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{midpoint, serde_rational, BigRational};
use crate::unipoly::UniPoly;
use crate::zpoly::ZPoly;

/// One end of a search range; infinite ends are explicit markers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    Finite(BigRational),
    PosInfinity,
}

/// Open interval `(lo, hi)` whose ends may be infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Range {
    pub lo: Bound,
    pub hi: Bound,
}

impl Range {
    pub fn real_line() -> Self {
        Range { lo: Bound::NegInfinity, hi: Bound::PosInfinity }
    }

    pub fn open(lo: BigRational, hi: BigRational) -> Self {
        Range { lo: Bound::Finite(lo), hi: Bound::Finite(hi) }
    }
}

/// `[lo, hi]` with `lo < hi`, or the exact root `lo = hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsolatingInterval {
    #[serde(with = "serde_rational")]
    pub lo: BigRational,
    #[serde(with = "serde_rational")]
    pub hi: BigRational,
}

impl IsolatingInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        IsolatingInterval { lo, hi }
    }

    pub fn exact(r: BigRational) -> Self {
        IsolatingInterval { lo: r.clone(), hi: r }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn intersects(&self, o: &IsolatingInterval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }
}

/// Isolates the distinct real roots of `p` inside the open range.
///
/// Intervals come back sorted by `lo`, pairwise disjoint, with endpoints
/// that are not roots unless the interval is a single exact point.
pub fn isolate_real_roots(p: &UniPoly, range: &Range) -> Result<Vec<IsolatingInterval>> {
    if p.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    Ok(isolate_zpoly(&p.to_zpoly(), range))
}

/// Same as [`isolate_real_roots`] for an integer polynomial (need not be square-free).
pub fn isolate_zpoly(p: &ZPoly, range: &Range) -> Vec<IsolatingInterval> {
    assert!(!p.is_zero(), "isolating roots of the zero polynomial");
    if p.degree() == Some(0) {
        return Vec::new();
    }
    isolate_squarefree(&p.square_free_part(), range)
}

/// [`isolate_zpoly`] for a polynomial already known to be square-free.
pub fn isolate_squarefree(f: &ZPoly, range: &Range) -> Vec<IsolatingInterval> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let bound = BigRational::from_integer(f.cauchy_bound());
    let lo = match &range.lo {
        Bound::NegInfinity => -bound.clone(),
        Bound::Finite(a) => a.clone(),
        Bound::PosInfinity => return Vec::new(),
    };
    let hi = match &range.hi {
        Bound::PosInfinity => bound,
        Bound::Finite(b) => b.clone(),
        Bound::NegInfinity => return Vec::new(),
    };
    if lo >= hi {
        return Vec::new();
    }
    let mut out = isolate_open(f, &lo, &hi);
    // Ends of the requested range may be roots; pull such endpoints inward.
    for iv in out.iter_mut() {
        if !iv.is_exact() {
            fix_endpoints(f, iv);
        }
    }
    out
}

/// Roots of `p` in the closed interval `[lo, hi]`.
pub fn isolate_closed(p: &ZPoly, lo: &BigRational, hi: &BigRational) -> Vec<IsolatingInterval> {
    let mut out = Vec::new();
    if p.sign_at(lo) == 0 {
        out.push(IsolatingInterval::exact(lo.clone()));
    }
    if lo < hi {
        out.extend(isolate_zpoly(p, &Range::open(lo.clone(), hi.clone())));
        if p.sign_at(hi) == 0 {
            out.push(IsolatingInterval::exact(hi.clone()));
        }
    }
    out
}

/// Number of distinct roots in the closed interval.
pub fn count_roots_closed(p: &ZPoly, lo: &BigRational, hi: &BigRational) -> usize {
    isolate_closed(p, lo, hi).len()
}

/// Descartes isolation of a square-free `f` on the open interval `(lo, hi)`.
fn isolate_open(f: &ZPoly, lo: &BigRational, hi: &BigRational) -> Vec<IsolatingInterval> {
    // g(t) = f(lo + (hi - lo) t), cleared of denominators, on (0, 1).
    let g = compose_affine(f, lo, &(hi - lo));
    let mut out = Vec::new();
    let width = hi - lo;
    descartes(&g, BigRational::zero(), BigRational::one(), &mut |a: BigRational, b: BigRational| {
        let x0 = lo + &width * &a;
        let x1 = lo + &width * &b;
        out.push(IsolatingInterval::new(x0, x1));
    });
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Integer polynomial proportional to `f(a + c t)`.
pub fn compose_affine(f: &ZPoly, a: &BigRational, c: &BigRational) -> ZPoly {
    // With a = A/D, c = C/D: D^n f((A + C t)/D) = F(A + C t), F(u) = D^n f(u/D).
    let d = num_integer::Integer::lcm(a.denom(), c.denom());
    let big_a = (a * BigRational::from_integer(d.clone())).to_integer();
    let big_c = (c * BigRational::from_integer(d.clone())).to_integer();
    let n = f.coeffs().len();
    let mut pw = BigInt::one();
    let mut fc = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        fc[i] = &f.coeffs()[i] * &pw;
        pw *= &d;
    }
    ZPoly::new(fc).taylor_shift(&big_a).scale_argument(&big_c).primitive()
}

/// Recursive bisection on (0,1); `a`, `b` track the current sub-interval in
/// the coordinates of the top-level call.
fn descartes(
    g: &ZPoly,
    a: BigRational,
    b: BigRational,
    emit: &mut dyn FnMut(BigRational, BigRational),
) {
    let n = match g.degree() {
        None | Some(0) => return,
        Some(n) => n,
    };
    let v = g.reverse().shift_one().sign_variations();
    if v == 0 {
        return;
    }
    if v == 1 {
        emit(a, b);
        return;
    }
    let m = midpoint(&a, &b);
    let left = g.halve_argument();
    // Root exactly at the midpoint t = 1/2, i.e. at t = 1 of `left`.
    let at_half: BigInt = left.coeffs().iter().sum();
    let right = left.shift_one();
    let _ = n;
    descartes(&left, a, m.clone(), emit);
    if at_half.is_zero() {
        emit(m.clone(), m.clone());
        // Deflate the known root before continuing on the right half.
        let deflated = right.div_exact(&ZPoly::from_i64(&[0, 1])).expect("t divides");
        descartes(&deflated, m, b, emit);
    } else {
        descartes(&right, m, b, emit);
    }
}

/// Moves interval ends off roots of `f` while keeping exactly one root inside.
fn fix_endpoints(f: &ZPoly, iv: &mut IsolatingInterval) {
    if f.sign_at(&iv.lo) == 0 {
        let mut s = midpoint(&iv.lo, &iv.hi);
        loop {
            if f.sign_at(&s) == 0 {
                *iv = IsolatingInterval::exact(s);
                return;
            }
            if isolate_open(f, &iv.lo, &s).is_empty() {
                iv.lo = s;
                break;
            }
            s = midpoint(&iv.lo, &s);
        }
    }
    if f.sign_at(&iv.hi) == 0 {
        let mut s = midpoint(&iv.lo, &iv.hi);
        loop {
            if f.sign_at(&s) == 0 {
                *iv = IsolatingInterval::exact(s);
                return;
            }
            if isolate_open(f, &s, &iv.hi).is_empty() {
                iv.hi = s;
                break;
            }
            s = midpoint(&s, &iv.hi);
        }
    }
}

/// Sturm sequence of `f`: `f, f', -rem(f, f'), ...`, kept primitive with
/// sign-preserving pseudo-remainders.
pub fn sturm_sequence(f: &ZPoly) -> Vec<ZPoly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        // lc(b)^k * a = q b + r; multiplying by an even power keeps the sign.
        let k = a.degree().unwrap() - b.degree().unwrap() + 1;
        let mut r = a.pseudo_rem(b);
        if b.lc().is_negative() && k % 2 == 1 {
            r = -&r;
        }
        if r.is_zero() {
            break;
        }
        let c = r.content();
        seq.push(-&r.div_exact_scalar(&c));
    }
    seq
}

fn variations_at(seq: &[ZPoly], x: &BigRational) -> usize {
    let mut last = 0;
    let mut v = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// Number of distinct real roots of `f` in the half-open interval `(a, b]`, by Sturm's theorem.
pub fn sturm_count(f: &ZPoly, a: &BigRational, b: &BigRational) -> usize {
    let f = f.square_free_part();
    if f.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(&f);
    variations_at(&seq, a) - variations_at(&seq, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn up(cs: &[i64]) -> UniPoly {
        UniPoly::from_i64(cs)
    }

    #[test]
    fn sqrt_two_on_zero_two() {
        let r = isolate_real_roots(&up(&[-2, 0, 1]), &Range::open(int(0), int(2))).unwrap();
        assert_eq!(r.len(), 1);
        let iv = &r[0];
        // lo^2 < 2 < hi^2
        assert!(&iv.lo * &iv.lo < int(2) && &iv.hi * &iv.hi > int(2));
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&up(&[1, 0, 1]), &Range::real_line()).unwrap().is_empty());
    }

    #[test]
    fn factored_quadratic_in_unit_interval() {
        // 6x^2 - 5x + 1 = (3x - 1)(2x - 1)
        let r = isolate_real_roots(&up(&[1, -5, 6]), &Range::open(int(0), int(1))).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].contains(&rat(1, 3)) && !r[0].contains(&rat(1, 2)));
        assert!(r[1].contains(&rat(1, 2)) && !r[1].contains(&rat(1, 3)));
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert_eq!(isolate_real_roots(&UniPoly::zero(), &Range::real_line()), Err(Error::IdenticallyZero));
    }

    #[test]
    fn range_endpoint_roots_are_excluded() {
        // roots 0, 1/2, 1 on (0, 1): only 1/2 is inside
        let p = &(&up(&[0, 1]) * &up(&[-1, 2])) * &up(&[-1, 1]);
        let r = isolate_real_roots(&p, &Range::open(int(0), int(1))).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].contains(&rat(1, 2)));
        assert!(r[0].is_exact() || (p.eval(&r[0].lo) != int(0) && p.eval(&r[0].hi) != int(0)));
        // (x - 1/4)(x - 1) on (0, 1): the upper endpoint is a root and must be moved
        let q = &up(&[-1, 4]) * &up(&[-1, 1]);
        let r = isolate_real_roots(&q, &Range::open(int(0), int(1))).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].is_exact() || q.eval(&r[0].hi) != int(0));
    }

    #[test]
    fn sturm_agrees_on_small_cases() {
        let f = ZPoly::from_i64(&[1, -5, 6]);
        assert_eq!(sturm_count(&f, &int(0), &int(1)), 2);
        assert_eq!(sturm_count(&f, &rat(2, 5), &int(1)), 1);
        let g = ZPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(sturm_count(&g, &int(-10), &int(10)), 2);
    }

    proptest! {
        #[test]
        fn isolates_known_rational_roots(roots in proptest::collection::btree_set((-40i64..40, 1i64..7), 1..6)) {
            let mut vals: Vec<BigRational> = roots.iter().map(|&(n, d)| rat(n, d)).collect();
            vals.sort();
            vals.dedup();
            let mut p = up(&[1]);
            for r in &vals {
                p = &p * &UniPoly::linear_root(r);
            }
            let ivs = isolate_real_roots(&p, &Range::real_line()).unwrap();
            prop_assert_eq!(ivs.len(), vals.len());
            for (iv, r) in ivs.iter().zip(&vals) {
                prop_assert!(iv.contains(r));
            }
            for w in ivs.windows(2) {
                prop_assert!(w[0].hi <= w[1].lo);
            }
            let z = p.to_zpoly();
            prop_assert_eq!(sturm_count(&z, &int(-100), &int(100)), vals.len());
        }
    }
}
