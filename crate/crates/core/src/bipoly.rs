//! Sparse bivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{format_sparse, parse_sparse, SparsePoly};
use crate::rational::{denominators_lcm, BigRational};
use crate::unipoly::UniPoly;
use crate::zbipoly::ZBiPoly;
use crate::zpoly::ZPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

/// Map from `(i, j)` (the monomial `x^i y^j`) to a nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn from_int(c: i64) -> Self {
        BiPoly::constant(BigRational::from_integer(c.into()))
    }

    pub fn monomial(c: BigRational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { terms }
    }

    pub fn x() -> Self {
        BiPoly::monomial(BigRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        BiPoly::monomial(BigRational::one(), 0, 1)
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), BigRational)>) -> Self {
        let mut terms: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for (e, c) in it {
            *terms.entry(e).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        BiPoly { terms }
    }

    /// Integer coefficients, for tests and fixtures.
    pub fn from_i64_terms(ts: &[((u32, u32), i64)]) -> Self {
        BiPoly::from_terms(ts.iter().map(|&(e, c)| (e, BigRational::from_integer(c.into()))))
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigRational> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_in(&self, axis: Axis) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match axis {
                Axis::X => i,
                Axis::Y => j,
            })
            .max()
    }

    pub fn scale(&self, c: &BigRational) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(e, v)| (*e, v * c)))
    }

    pub fn pow(&self, n: u32) -> BiPoly {
        let mut out = BiPoly::from_int(1);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn partial_derivative(&self, axis: Axis) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().filter_map(|(&(i, j), c)| match axis {
            Axis::X if i > 0 => Some(((i - 1, j), c * BigRational::from_integer(i.into()))),
            Axis::Y if j > 0 => Some(((i, j - 1), c * BigRational::from_integer(j.into()))),
            _ => None,
        }))
    }

    /// `p(value, y)` for `Axis::X`, `p(x, value)` for `Axis::Y`.
    pub fn specialize(&self, axis: Axis, value: &BigRational) -> UniPoly {
        let n = self.degree_in(axis.other()).unwrap_or(0) as usize;
        let mut cs = vec![BigRational::zero(); n + 1];
        for (&(i, j), c) in &self.terms {
            let (fixed, free) = match axis {
                Axis::X => (i, j),
                Axis::Y => (j, i),
            };
            cs[free as usize] += c * num_traits::pow(value.clone(), fixed as usize);
        }
        UniPoly::new(cs)
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (&(i, j), c)| {
            acc + c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize)
        })
    }

    /// `(z, s)` with `self = z / s`, `z` integral and `s > 0` the denominator lcm.
    pub fn to_integer(&self) -> (ZBiPoly, BigInt) {
        let l = denominators_lcm(self.terms.values());
        let z = ZBiPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| {
            ((i as usize, j as usize), (c * BigRational::from_integer(l.clone())).to_integer())
        }));
        (z, l)
    }

    /// Integer multiple with content 1; the sign of the leading term is kept.
    pub fn to_primitive_zbi(&self) -> ZBiPoly {
        self.to_integer().0.primitive_keep_sign()
    }

    pub fn from_zbi(z: &ZBiPoly) -> BiPoly {
        BiPoly::from_terms(
            z.terms().map(|((i, j), c)| ((i as u32, j as u32), BigRational::from_integer(c.clone()))),
        )
    }

    /// Integer coefficients with content 1, same sign convention as input.
    pub fn primitive_integer(&self) -> BiPoly {
        BiPoly::from_zbi(&self.to_primitive_zbi())
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// `p(-x, y)` or `p(x, -y)`.
    pub fn negate_var(&self, axis: Axis) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| {
            let e = match axis {
                Axis::X => i,
                Axis::Y => j,
            };
            ((i, j), if e % 2 == 1 { -c } else { c.clone() })
        }))
    }

    /// Numerator of `p(1/x, y)` after multiplying by `x^{deg_x p}` (resp. `y`).
    pub fn invert_var(&self, axis: Axis) -> BiPoly {
        let d = self.degree_in(axis).unwrap_or(0);
        BiPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| {
            let e = match axis {
                Axis::X => (d - i, j),
                Axis::Y => (i, d - j),
            };
            (e, c.clone())
        }))
    }

    pub fn swap_vars(&self) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    /// Divide by a monomial `x^a y^b` that divides every term.
    pub fn strip_monomial_factor(&self) -> BiPoly {
        let a = self.terms.keys().map(|e| e.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|e| e.1).min().unwrap_or(0);
        BiPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| ((i - a, j - b), c.clone())))
    }

    pub fn parse(text: &str) -> Result<BiPoly> {
        let sp = parse_sparse(text, &["x", "y"])?;
        Ok(BiPoly::from_terms(sp.into_iter().map(|(e, c)| ((e[0], e[1]), c))))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<BiPoly> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Leading coefficient sign with respect to the printed term order.
    pub fn leading_sign(&self) -> i32 {
        let top = self.terms.iter().max_by(|a, b| {
            let (da, db) = (a.0 .0 + a.0 .1, b.0 .0 + b.0 .1);
            da.cmp(&db).then_with(|| a.0.cmp(b.0))
        });
        match top {
            Some((_, c)) if c.is_negative() => -1,
            Some(_) => 1,
            None => 0,
        }
    }
}

impl FromStr for BiPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<BiPoly> {
        BiPoly::parse(s)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp: SparsePoly = self.terms.iter().map(|(&(i, j), c)| (vec![i, j], c.clone())).collect();
        f.write_str(&format_sparse(&sp, &["x", "y"]))
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    i: u32,
    j: u32,
    #[serde(with = "crate::rational::serde_rational")]
    c: BigRational,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    terms: Vec<JsonTerm>,
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JsonPoly {
            terms: self.terms.iter().map(|(&(i, j), c)| JsonTerm { i, j, c: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BiPoly, D::Error> {
        let jp = JsonPoly::deserialize(d)?;
        Ok(BiPoly::from_terms(jp.terms.into_iter().map(|t| ((t.i, t.j), t.c))))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().chain(o.terms.iter()).map(|(e, c)| (*e, c.clone())))
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        self + &(-o)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        let mut terms: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            for (&(p, q), d) in &o.terms {
                *terms.entry((a + p, b + q)).or_insert_with(BigRational::zero) += c * d;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        BiPoly { terms }
    }
}

/// Dimension of the space of bivariate polynomials of degree at most `k`.
pub fn mu(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// Monomials of degree at most `k` in graded lexicographic order:
/// `1, x, y, x^2, xy, y^2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialBasis {
    pub k: usize,
    pub entries: Vec<(u32, u32)>,
}

impl MonomialBasis {
    pub fn new(k: usize) -> Self {
        let mut entries = Vec::with_capacity(mu(k));
        for n in 0..=k as u32 {
            for j in 0..=n {
                entries.push((n - j, j));
            }
        }
        MonomialBasis { k, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn poly(&self, m: usize) -> BiPoly {
        let (i, j) = self.entries[m];
        BiPoly::monomial(BigRational::one(), i, j)
    }

    pub fn zpoly(&self, m: usize) -> ZBiPoly {
        let (i, j) = self.entries[m];
        ZBiPoly::monomial(BigInt::one(), i as usize, j as usize)
    }
}

/// Univariate polynomial with integer coefficients viewed as a `BiPoly` in `axis`.
pub fn lift_univariate(p: &ZPoly, axis: Axis) -> BiPoly {
    BiPoly::from_terms(p.coeffs().iter().enumerate().map(|(n, c)| {
        let e = match axis {
            Axis::X => (n as u32, 0),
            Axis::Y => (0, n as u32),
        };
        (e, BigRational::from_integer(c.clone()))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn mu_values() {
        assert_eq!(mu(0), 1);
        assert_eq!(mu(2), 6);
        assert_eq!(mu(3), 10);
        for k in 0..50 {
            assert_eq!(mu(k + 1) - mu(k), k + 2);
        }
        let b = MonomialBasis::new(2);
        assert_eq!(b.entries, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("y - x^2").partial_derivative(Axis::X), p("-2x"));
        assert_eq!(p("x^2 + y^2 - 1").partial_derivative(Axis::Y), p("2y"));
        assert!(p("5").partial_derivative(Axis::X).is_zero());
    }

    #[test]
    fn specialization() {
        assert_eq!(p("y - x^2").specialize(Axis::X, &rat(1, 2)), UniPoly::new(vec![rat(-1, 4), rat(1, 1)]));
        assert_eq!(p("x^2 + y^2 - 1").specialize(Axis::X, &rat(1, 1)), UniPoly::from_i64(&[0, 0, 1]));
        assert_eq!(p("x^2 + y^2 - 1").specialize(Axis::X, &rat(2, 1)), UniPoly::from_i64(&[3, 0, 1]));
    }

    #[test]
    fn text_and_json_round_trip() {
        for s in ["y^2 - x^3 - 17", "x^2 + y^2 - 1", "(1/3)*x*y - 7/2", "0"] {
            let a = p(s);
            assert_eq!(p(&a.to_string()), a);
            let js = serde_json::to_string(&a).unwrap();
            assert_eq!(BiPoly::from_json(&js).unwrap(), a);
        }
        let q = BiPoly::from_json(r#"{"terms":[{"i":0,"j":2,"c":"1"},{"i":1,"j":0,"c":"-1/2"}]}"#).unwrap();
        assert_eq!(q, p("y^2 - x/2"));
    }

    #[test]
    fn symmetries() {
        let par = p("y - x^2");
        assert_eq!(par.negate_var(Axis::X), par);
        assert_eq!(par.invert_var(Axis::Y), p("1 - x^2*y"));
        assert_eq!(par.invert_var(Axis::X), p("x^2*y - 1"));
    }

    #[test]
    fn integer_form() {
        let a = p("x/2 + y/3 - 1");
        let (z, s) = a.to_integer();
        assert_eq!(s, BigInt::from(6));
        assert_eq!(BiPoly::from_zbi(&z), p("3x + 2y - 6"));
        assert_eq!(p("-4x + 6y").primitive_integer(), p("-2x + 3y"));
    }
}
