//! Dense bivariate polynomials over the integers, stored as polynomials in
//! `y` whose coefficients are polynomials in `x`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::BigRational;
use crate::zpoly::ZPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZBiPoly {
    /// `rows[j]` is the coefficient of `y^j`.
    rows: Vec<ZPoly>,
}

impl ZBiPoly {
    pub fn new(mut rows: Vec<ZPoly>) -> Self {
        while rows.last().is_some_and(ZPoly::is_zero) {
            rows.pop();
        }
        ZBiPoly { rows }
    }

    pub fn zero() -> Self {
        ZBiPoly::default()
    }

    pub fn constant(c: BigInt) -> Self {
        ZBiPoly::new(vec![ZPoly::constant(c)])
    }

    pub fn one() -> Self {
        ZBiPoly::constant(BigInt::one())
    }

    /// `c x^i y^j`
    pub fn monomial(c: BigInt, i: usize, j: usize) -> Self {
        let mut rows = vec![ZPoly::zero(); j + 1];
        rows[j] = ZPoly::monomial(c, i);
        ZBiPoly::new(rows)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), BigInt)>) -> Self {
        let mut grid: Vec<Vec<BigInt>> = Vec::new();
        for ((i, j), c) in terms {
            if grid.len() <= j {
                grid.resize(j + 1, Vec::new());
            }
            if grid[j].len() <= i {
                grid[j].resize(i + 1, BigInt::zero());
            }
            grid[j][i] += c;
        }
        ZBiPoly::new(grid.into_iter().map(ZPoly::new).collect())
    }

    pub fn rows(&self) -> &[ZPoly] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &BigInt)> {
        self.rows.iter().enumerate().flat_map(|(j, r)| {
            r.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| ((i, j), c))
        })
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms().map(|((i, j), _)| i + j).max()
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.rows.iter().filter_map(ZPoly::degree).max()
    }

    /// Leading coefficient in `y`, a polynomial in `x`.
    pub fn lc_y(&self) -> ZPoly {
        self.rows.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for r in &self.rows {
            g = num_integer::Integer::gcd(&g, &r.content());
        }
        g
    }

    pub fn div_exact_scalar(&self, c: &BigInt) -> ZBiPoly {
        ZBiPoly::new(self.rows.iter().map(|r| r.div_exact_scalar(c)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> ZBiPoly {
        ZBiPoly::new(self.rows.iter().map(|r| r.scale(c)).collect())
    }

    /// Content removed, sign kept.
    pub fn primitive_keep_sign(&self) -> ZBiPoly {
        if self.is_zero() {
            return ZBiPoly::zero();
        }
        self.div_exact_scalar(&self.content())
    }

    pub fn dx(&self) -> ZBiPoly {
        ZBiPoly::new(self.rows.iter().map(ZPoly::derivative).collect())
    }

    pub fn dy(&self) -> ZBiPoly {
        ZBiPoly::new(
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, r)| r.scale(&BigInt::from(j)))
                .collect(),
        )
    }

    /// Swaps the roles of `x` and `y`.
    pub fn transpose(&self) -> ZBiPoly {
        ZBiPoly::from_terms(self.terms().map(|((i, j), c)| ((j, i), c.clone())))
    }

    /// Integer polynomial in `y` proportional to `self(x0, y)`.
    pub fn specialize_x(&self, x0: &BigRational) -> ZPoly {
        let dx = self.degree_x().unwrap_or(0);
        let (a, b) = (x0.numer(), x0.denom());
        ZPoly::new(
            self.rows
                .iter()
                .map(|r| {
                    // b^dx * r(a/b) = b^(dx - deg r) * homogeneous value
                    let Some(dr) = r.degree() else { return BigInt::zero() };
                    r.eval_homogeneous(a, b) * num_traits::pow(b.clone(), dx - dr)
                })
                .collect(),
        )
    }

    /// Integer polynomial in `x` proportional to `self(x, y0)`.
    pub fn specialize_y(&self, y0: &BigRational) -> ZPoly {
        self.transpose().specialize_x(y0)
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for r in self.rows.iter().rev() {
            acc = acc * y + r.eval(x);
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational, y: &BigRational) -> i32 {
        let v = self.eval(x, y);
        if v.is_zero() {
            0
        } else if v > BigRational::zero() {
            1
        } else {
            -1
        }
    }

    /// Exact quotient, or `None` if `d` does not divide `self` in Z[x,y].
    pub fn div_exact(&self, d: &ZBiPoly) -> Option<ZBiPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(ZBiPoly::zero());
        }
        let dn = d.rows.len() - 1;
        let n = self.rows.len() - 1;
        if n < dn {
            return None;
        }
        let mut r = self.rows.clone();
        let mut q = vec![ZPoly::zero(); n - dn + 1];
        let dl = d.lc_y();
        for i in (0..=n - dn).rev() {
            if r[i + dn].is_zero() {
                continue;
            }
            let qq = r[i + dn].div_exact(&dl)?;
            for (j, dc) in d.rows.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&qq * dc);
            }
            q[i] = qq;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ZBiPoly::new(q))
    }

    /// Pseudo-remainder in `y`: `lc_y(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem_y(&self, d: &ZBiPoly) -> ZBiPoly {
        let dn = d.degree_y().expect("pseudo remainder by zero");
        let dl = d.lc_y();
        let mut r = self.clone();
        let Some(sn) = self.degree_y() else { return r };
        if sn < dn {
            return r;
        }
        let mut steps_left = sn - dn + 1;
        while let Some(rn) = r.degree_y() {
            if rn < dn {
                break;
            }
            let top = r.lc_y();
            let shift = rn - dn;
            let mut nr: Vec<ZPoly> = r.rows.iter().map(|c| c * &dl).collect();
            for (j, dc) in d.rows.iter().enumerate() {
                nr[shift + j] = &nr[shift + j] - &(&top * dc);
            }
            r = ZBiPoly::new(nr);
            steps_left -= 1;
        }
        for _ in 0..steps_left {
            r = ZBiPoly::new(r.rows.iter().map(|c| c * &dl).collect());
        }
        r
    }

    /// `self(x - s*y, y)`: the shear used to put solutions in generic position.
    pub fn shear(&self, s: i64) -> ZBiPoly {
        if s == 0 {
            return self.clone();
        }
        // (x - s y)^i expanded binomially.
        let mut out: Vec<Vec<BigInt>> = Vec::new();
        let neg_s = BigInt::from(-s);
        for ((i, j), c) in self.terms() {
            let mut binom = BigInt::one();
            let mut spow = BigInt::one();
            for m in 0..=i {
                // term: C(i,m) x^(i-m) (-s y)^m
                let coeff = c * &binom * &spow;
                let (xi, yj) = (i - m, j + m);
                if out.len() <= yj {
                    out.resize(yj + 1, Vec::new());
                }
                if out[yj].len() <= xi {
                    out[yj].resize(xi + 1, BigInt::zero());
                }
                out[yj][xi] += coeff;
                binom = binom * BigInt::from(i - m) / BigInt::from(m + 1);
                spow *= &neg_s;
            }
        }
        ZBiPoly::new(out.into_iter().map(ZPoly::new).collect())
    }

    /// Coefficient of `y^deg` in the top-degree homogeneous part.
    pub fn top_coeff_y(&self) -> BigInt {
        let Some(d) = self.total_degree() else { return BigInt::zero() };
        self.rows.get(d).map(|r| r.coeff(0)).unwrap_or_default()
    }
}

impl Add for &ZBiPoly {
    type Output = ZBiPoly;
    fn add(self, o: &ZBiPoly) -> ZBiPoly {
        let n = self.rows.len().max(o.rows.len());
        ZBiPoly::new(
            (0..n)
                .map(|j| match (self.rows.get(j), o.rows.get(j)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    _ => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Sub for &ZBiPoly {
    type Output = ZBiPoly;
    fn sub(self, o: &ZBiPoly) -> ZBiPoly {
        self + &(-o)
    }
}

impl Neg for &ZBiPoly {
    type Output = ZBiPoly;
    fn neg(self) -> ZBiPoly {
        ZBiPoly { rows: self.rows.iter().map(|r| -r).collect() }
    }
}

impl Mul for &ZBiPoly {
    type Output = ZBiPoly;
    fn mul(self, o: &ZBiPoly) -> ZBiPoly {
        if self.is_zero() || o.is_zero() {
            return ZBiPoly::zero();
        }
        let mut rows = vec![ZPoly::zero(); self.rows.len() + o.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.rows.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                rows[i + j] = &rows[i + j] + &(a * b);
            }
        }
        ZBiPoly::new(rows)
    }
}
