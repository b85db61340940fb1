//! Dense univariate polynomials with big-integer coefficients.
//!
//! This is the workhorse behind root isolation, resultants and the
//! fraction-free determinant routines. Coefficients are stored low degree
//! first with no trailing zeros.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        ZPoly::new(vec![c])
    }

    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    /// The monomial `c * x^n`.
    pub fn monomial(c: BigInt, n: usize) -> Self {
        let mut v = vec![BigInt::zero(); n + 1];
        v[n] = c;
        ZPoly::new(v)
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        ZPoly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigInt) -> ZPoly {
        if c.is_zero() {
            return ZPoly::zero();
        }
        ZPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_exact_scalar(&self, c: &BigInt) -> ZPoly {
        ZPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| {
                    debug_assert!((a % c).is_zero());
                    a / c
                })
                .collect(),
        }
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with a positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        self.div_exact_scalar(&c)
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `b^n * p(a/b)` for `n = deg p`, evaluated without fractions.
    pub fn eval_homogeneous(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        // The loop multiplies the constant term by b^n and the leading term by 1.
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of `p(x)` at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval_homogeneous(x.numer(), x.denom());
        sign_of(&v)
    }

    /// `p(x + c)`.
    pub fn taylor_shift(&self, c: &BigInt) -> ZPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        if c.is_zero() || n < 2 {
            return self.clone();
        }
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        ZPoly::new(a)
    }

    /// `p(x + 1)`; the unit shift avoids all multiplications.
    pub fn shift_one(&self) -> ZPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                let t = a[j + 1].clone();
                a[j] += t;
            }
        }
        ZPoly::new(a)
    }

    /// `x^n p(1/x)` with `n = deg p`.
    pub fn reverse(&self) -> ZPoly {
        let mut a = self.coeffs.clone();
        a.reverse();
        ZPoly::new(a)
    }

    /// `2^n p(x/2)`: coefficient `i` is multiplied by `2^(n-i)`.
    pub fn halve_argument(&self) -> ZPoly {
        let n = self.coeffs.len();
        ZPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (n - 1 - i))
                .collect(),
        )
    }

    /// `p(x * c)` for an integer scale.
    pub fn scale_argument(&self, c: &BigInt) -> ZPoly {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        ZPoly::new(out)
    }

    /// Number of sign changes in the coefficient sequence.
    pub fn sign_variations(&self) -> usize {
        let mut last = 0;
        let mut v = 0;
        for c in &self.coeffs {
            let s = sign_of(c);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self` over Z.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        let dn = d.degree().unwrap();
        let n = self.degree().unwrap();
        if n < dn {
            return None;
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dn + 1];
        let dl = d.lc();
        for i in (0..=n - dn).rev() {
            let top = &r[i + dn];
            if top.is_zero() {
                continue;
            }
            let (qq, rem) = top.div_rem(&dl);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &qq * dc;
            }
            q[i] = qq;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ZPoly::new(q))
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &ZPoly) -> ZPoly {
        let dn = d.degree().expect("pseudo remainder by zero");
        let mut r = self.clone();
        let dl = d.lc();
        let Some(sn) = self.degree() else { return r };
        if sn < dn {
            return r;
        }
        let mut steps_left = sn - dn + 1;
        while let Some(rn) = r.degree() {
            if rn < dn {
                break;
            }
            let top = r.lc();
            let shift = rn - dn;
            let mut nc: Vec<BigInt> = r.coeffs.iter().map(|c| c * &dl).collect();
            for (j, dc) in d.coeffs.iter().enumerate() {
                nc[shift + j] -= &top * dc;
            }
            r = ZPoly::new(nc);
            steps_left -= 1;
        }
        r.scale(&num_traits::pow(dl, steps_left))
    }

    /// Greatest common divisor (primitive, positive leading coefficient) via
    /// the subresultant remainder sequence.
    pub fn gcd(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        if self.degree() == Some(0) || other.degree() == Some(0) || coprime_modular(self, other) {
            return ZPoly::one();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b.primitive();
            }
            if r.degree() == Some(0) {
                return ZPoly::one();
            }
            a = b;
            let denom = &g * num_traits::pow(h.clone(), delta);
            b = r.div_exact_scalar(&denom);
            g = a.lc();
            h = if delta == 0 {
                h
            } else {
                let gd = num_traits::pow(g.clone(), delta);
                let hd = num_traits::pow(h.clone(), delta - 1);
                gd / hd
            };
        }
    }

    pub fn square_free_part(&self) -> ZPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.primitive().div_exact(&g).expect("gcd divides").primitive()
    }

    /// Sum of absolute values of coefficients divided by |lc| gives a crude
    /// but valid root bound; returns an integer `B` with all real roots in `(-B, B)`.
    pub fn cauchy_bound(&self) -> BigInt {
        let lc = self.lc().abs();
        let mx = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        mx.div_ceil(&lc) + BigInt::from(2)
    }
}

/// Sufficient test for a trivial gcd: a prime not dividing either leading
/// coefficient for which the reductions are coprime.
fn coprime_modular(a: &ZPoly, b: &ZPoly) -> bool {
    use crate::modp::{reduce, PolyP, PRIMES};
    for &p in &PRIMES[..2] {
        if reduce(&a.lc(), p) == 0 || reduce(&b.lc(), p) == 0 {
            continue;
        }
        if PolyP::from_zpoly(a, p).gcd(&PolyP::from_zpoly(b, p)).degree() == Some(0) {
            return true;
        }
    }
    false
}

pub fn sign_of(v: &BigInt) -> i32 {
    match v.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

impl Add for &ZPoly {
    type Output = ZPoly;
    fn add(self, o: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        ZPoly::new(v)
    }
}

impl Sub for &ZPoly {
    type Output = ZPoly;
    fn sub(self, o: &ZPoly) -> ZPoly {
        self + &(-o)
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &ZPoly {
    type Output = ZPoly;
    fn mul(self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        ZPoly::new(v)
    }
}

impl PartialOrd for ZPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ZPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// Fraction-free (Bareiss) determinant over Z[t], with row pivoting.
pub fn bareiss_det(mut m: Vec<Vec<ZPoly>>) -> ZPoly {
    let n = m.len();
    if n == 0 {
        return ZPoly::one();
    }
    let mut sign = false;
    let mut prev = ZPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // Pick the nonzero pivot of smallest degree to limit growth.
            let Some(p) = (k + 1..n)
                .filter(|&i| !m[i][k].is_zero())
                .min_by_key(|&i| m[i][k].degree())
            else {
                return ZPoly::zero();
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> ZPoly {
        ZPoly::from_i64(cs)
    }

    #[test]
    fn gcd_of_products() {
        // (x-1)(x+2) and (x-1)(3x+5)
        let a = &p(&[-1, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[5, 3]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[1, 1]).gcd(&p(&[2, 1])), ZPoly::one());
    }

    #[test]
    fn square_free_part_strips_repeats() {
        let a = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[3, 2]);
        assert_eq!(a.square_free_part(), &p(&[-1, 1]) * &p(&[3, 2]));
    }

    #[test]
    fn exact_division_and_shift() {
        let a = &p(&[1, 2, 1]) * &p(&[4, 0, 1]);
        assert_eq!(a.div_exact(&p(&[1, 2, 1])).unwrap(), p(&[4, 0, 1]));
        assert!(a.div_exact(&p(&[1, 3])).is_none());
        // (x+1)^2 shifted by -1 is x^2
        assert_eq!(p(&[1, 2, 1]).taylor_shift(&BigInt::from(-1)), p(&[0, 0, 1]));
        assert_eq!(p(&[0, 0, 1]).shift_one(), p(&[1, 2, 1]));
    }

    #[test]
    fn homogeneous_evaluation() {
        // 6x^2 - 5x + 1 at 1/3 is zero
        let f = p(&[1, -5, 6]);
        assert!(f.eval_homogeneous(&BigInt::from(1), &BigInt::from(3)).is_zero());
        assert_eq!(f.sign_at(&crate::rational::rat(1, 4)), 1);
        assert_eq!(f.sign_at(&crate::rational::rat(2, 5)), -1);
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![
            vec![p(&[0, 1]), p(&[1]), p(&[2])],
            vec![p(&[1]), p(&[0, 1]), p(&[0])],
            vec![p(&[3]), p(&[0]), p(&[0, 1])],
        ];
        // det = t*(t*t - 0) - 1*(t - 0) + 2*(0 - 3t) = t^3 - 7t
        assert_eq!(bareiss_det(m), p(&[0, -7, 0, 1]));
        let singular = vec![vec![p(&[0]), p(&[1])], vec![p(&[0]), p(&[2])]];
        assert!(bareiss_det(singular).is_zero());
    }
}
