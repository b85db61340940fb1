//! Dense polynomials over a prime field `Z/p` with `p < 2^31`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::zpoly::ZPoly;

pub const PRIMES: [u64; 16] = [
    1_000_003, 1_000_033, 1_000_037, 1_000_039, 1_000_081, 1_000_099, 1_000_117, 1_000_121, 1_000_133, 1_000_151,
    1_000_159, 1_000_171, 1_000_183, 1_000_187, 1_000_193, 1_000_199,
];

pub fn reduce(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
}

pub fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyP {
    pub c: Vec<u64>,
    pub p: u64,
}

impl PolyP {
    pub fn new(mut c: Vec<u64>, p: u64) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyP { c, p }
    }

    pub fn from_zpoly(f: &ZPoly, p: u64) -> Self {
        PolyP::new(f.coeffs().iter().map(|c| reduce(c, p)).collect(), p)
    }

    pub fn x(p: u64) -> Self {
        PolyP::new(vec![0, 1], p)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn monic(&self) -> PolyP {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let li = inv(l, self.p);
                PolyP::new(self.c.iter().map(|a| a * li % self.p).collect(), self.p)
            }
        }
    }

    pub fn sub(&self, o: &PolyP) -> PolyP {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        PolyP::new(
            (0..n)
                .map(|i| (self.c.get(i).copied().unwrap_or(0) + p - o.c.get(i).copied().unwrap_or(0)) % p)
                .collect(),
            p,
        )
    }

    pub fn mul(&self, o: &PolyP) -> PolyP {
        if self.is_zero() || o.is_zero() {
            return PolyP::new(vec![], self.p);
        }
        let p = self.p;
        let mut r = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] = (r[i + j] + a * b) % p;
            }
        }
        PolyP::new(r, p)
    }

    /// `(quotient, remainder)`.
    pub fn divrem(&self, d: &PolyP) -> (PolyP, PolyP) {
        let p = self.p;
        let dn = d.degree().expect("division by zero");
        let li = inv(*d.c.last().unwrap(), p);
        let mut r = self.c.clone();
        if r.len() <= dn {
            return (PolyP::new(vec![], p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dn];
        for i in (0..q.len()).rev() {
            let t = r[i + dn] * li % p;
            q[i] = t;
            if t == 0 {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - t * dc % p) % p;
            }
        }
        r.truncate(dn);
        (PolyP::new(q, p), PolyP::new(r, p))
    }

    pub fn rem(&self, d: &PolyP) -> PolyP {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &PolyP) -> PolyP {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> PolyP {
        let p = self.p;
        PolyP::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * (i as u64 % p) % p).collect(), p)
    }

    /// `base^e mod m`.
    pub fn powmod(base: &PolyP, mut e: u64, m: &PolyP) -> PolyP {
        let mut r = PolyP::new(vec![1], base.p).rem(m);
        let mut b = base.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).rem(m);
            }
            b = b.mul(&b).rem(m);
            e >>= 1;
        }
        r
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, a| (acc * x + a) % self.p)
    }
}

/// Degrees of the irreducible factors of a square-free `f` (distinct-degree
/// factorization, equal-degree parts counted by multiplicity of degree).
pub fn factor_degrees(f: &PolyP) -> Vec<usize> {
    let p = f.p;
    let mut f = f.monic();
    let mut out = Vec::new();
    let x = PolyP::x(p);
    let mut h = x.clone();
    let mut i = 1;
    while let Some(df) = f.degree() {
        if df < 2 * i {
            if df > 0 {
                out.push(df);
            }
            break;
        }
        h = PolyP::powmod(&h, p, &f);
        let g = f.gcd(&h.sub(&x));
        let dg = g.degree().unwrap_or(0);
        if dg > 0 {
            for _ in 0..dg / i {
                out.push(i);
            }
            f = f.divrem(&g).0;
            h = h.rem(&f);
        }
        i += 1;
    }
    out
}

/// Subset sums of a multiset of factor degrees.
pub fn possible_degrees(parts: &[usize]) -> Vec<bool> {
    let total: usize = parts.iter().sum();
    let mut can = vec![false; total + 1];
    can[0] = true;
    for &d in parts {
        for s in (d..=total).rev() {
            if can[s - d] {
                can[s] = true;
            }
        }
    }
    can
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ddf_patterns() {
        let p = 1_000_003;
        // (x - 1)(x - 2)(x^2 + 1)... x^2+1 splits iff p = 1 mod 4; 1000003 = 3 mod 4
        let f = ZPoly::from_i64(&[2, -3, 1]);
        let g = ZPoly::from_i64(&[1, 0, 1]);
        let fg = &f * &g;
        let mut d = factor_degrees(&PolyP::from_zpoly(&fg, p));
        d.sort();
        assert_eq!(d, vec![1, 1, 2]);
        let can = possible_degrees(&d);
        assert_eq!(can, vec![true, true, true, true, true]);
        // x^3 - 2 mod p: either irreducible or splits according to cubic residues
        let c = factor_degrees(&PolyP::from_zpoly(&ZPoly::from_i64(&[-2, 0, 0, 1]), p));
        assert_eq!(c.iter().sum::<usize>(), 3);
    }

    #[test]
    fn field_ops() {
        let p = 101;
        let a = PolyP::new(vec![1, 2, 3], p);
        let b = PolyP::new(vec![5, 1], p);
        let (q, r) = a.mul(&b).divrem(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
        assert_eq!(inv(7, p) * 7 % p, 1);
    }
}
