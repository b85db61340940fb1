//! Resultants and first subresultants as Sylvester determinants over Z[x].

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bipoly::{Axis, BiPoly};
use crate::rational::BigRational;
use crate::unipoly::UniPoly;
use crate::zbipoly::ZBiPoly;
use crate::zpoly::{bareiss_det, ZPoly};

fn zpow(p: &ZPoly, n: usize) -> ZPoly {
    let mut out = ZPoly::one();
    for _ in 0..n {
        out = &out * p;
    }
    out
}

/// `Res_y(a, b)` as a polynomial in `x`. Constant-in-`y` arguments follow
/// the usual convention `Res(c, b) = c^{deg b}`.
pub fn res_y(a: &ZBiPoly, b: &ZBiPoly) -> ZPoly {
    if a.is_zero() || b.is_zero() {
        return ZPoly::zero();
    }
    let m = a.degree_y().unwrap();
    let n = b.degree_y().unwrap();
    if m == 0 {
        return zpow(&a.rows()[0], n);
    }
    if n == 0 {
        return zpow(&b.rows()[0], m);
    }
    let size = m + n;
    let mut mat = vec![vec![ZPoly::zero(); size]; size];
    for i in 0..n {
        for (e, c) in a.rows().iter().enumerate() {
            mat[i][m - e + i] = c.clone();
        }
    }
    for i in 0..m {
        for (e, c) in b.rows().iter().enumerate() {
            mat[n + i][n - e + i] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Resultant over the integers, eliminating `axis`.
pub fn res_z(a: &ZBiPoly, b: &ZBiPoly, eliminate: Axis) -> ZPoly {
    match eliminate {
        Axis::Y => res_y(a, b),
        Axis::X => res_y(&a.transpose(), &b.transpose()),
    }
}

/// Exact resultant of rational polynomials, eliminating `eliminate`; the
/// result is a polynomial in the other variable.
pub fn resultant(p: &BiPoly, q: &BiPoly, eliminate: Axis) -> UniPoly {
    if p.is_zero() || q.is_zero() {
        return UniPoly::zero();
    }
    let (zp, sp) = p.to_integer();
    let (zq, sq) = q.to_integer();
    let r = res_z(&zp, &zq, eliminate);
    let m = p.degree_in(eliminate).unwrap_or(0) as usize;
    let n = q.degree_in(eliminate).unwrap_or(0) as usize;
    // Res(zp/sp, zq/sq) = sp^-n sq^-m Res(zp, zq)
    let denom = num_traits::pow(sp, n) * num_traits::pow(sq, m);
    let scale = BigRational::new(BigInt::one(), denom);
    UniPoly::new(r.coeffs().iter().map(|c| BigRational::from_integer(c.clone()) * &scale).collect())
}

/// Coefficients `(s11, s10)` of the first subresultant `S_1 = s11 y + s10` of
/// `a` and `b` with respect to `y`. Requires `deg_y a > deg_y b >= 1`.
pub fn subresultant_1(a: &ZBiPoly, b: &ZBiPoly) -> (ZPoly, ZPoly) {
    let m = a.degree_y().expect("nonzero");
    let n = b.degree_y().expect("nonzero");
    assert!(m > n && n >= 1, "subresultant_1 needs deg a > deg b >= 1");
    if n == 1 {
        // S_1 is a nonzero constant multiple of b here
        return (b.rows()[1].clone(), b.rows()[0].clone());
    }
    let cols = m + n - 1;
    let rows = m + n - 2;
    let mut full = vec![vec![ZPoly::zero(); cols]; rows];
    for i in 0..n - 1 {
        for (e, c) in a.rows().iter().enumerate() {
            full[i][m - e + i] = c.clone();
        }
    }
    for i in 0..m - 1 {
        for (e, c) in b.rows().iter().enumerate() {
            full[n - 1 + i][n - e + i] = c.clone();
        }
    }
    let pick = |deg: usize| -> ZPoly {
        let last = cols - 1 - deg;
        let mat: Vec<Vec<ZPoly>> = full
            .iter()
            .map(|row| {
                let mut r: Vec<ZPoly> = row[..cols - 2].to_vec();
                r.push(row[last].clone());
                r
            })
            .collect();
        bareiss_det(mat)
    };
    (pick(1), pick(0))
}

/// Content-free integer polynomial with leading coefficient sign kept.
pub fn is_identically_zero(p: &ZPoly) -> bool {
    p.coeffs().iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_worked_examples() {
        let r = resultant(&p("y - x^2"), &p("y - x"), Axis::Y);
        // x - x^2 up to sign
        let z = r.to_zpoly().primitive();
        assert_eq!(z, ZPoly::from_i64(&[0, 1, -1]).primitive());
        assert!(resultant(&p("y - x^2"), &p("2y - 2x^2"), Axis::Y).is_zero());
        assert_eq!(resultant(&p("y - x^2"), &p("1"), Axis::Y), UniPoly::from_i64(&[1]));
    }

    #[test]
    fn rational_scaling_is_exact() {
        // Res_y(y - 1/2, y - x) = x - 1/2 up to sign
        let r = resultant(&p("y - 1/2"), &p("y - x"), Axis::Y);
        assert_eq!(r.eval(&rat(1, 2)), rat(0, 1));
        assert_eq!(r.degree(), Some(1));
        assert!(r.coeffs()[1] == rat(1, 1) || r.coeffs()[1] == rat(-1, 1));
    }

    #[test]
    fn multiplicative_and_antisymmetric() {
        let a = p("x^2 + y^2 - 1");
        let b = p("y - x + 2");
        let c = p("x*y - 3");
        let ab = resultant(&a, &(&b * &c), Axis::Y);
        let prod = &resultant(&a, &b, Axis::Y) * &resultant(&a, &c, Axis::Y);
        assert_eq!(ab, prod);
        let ba = resultant(&b, &a, Axis::X);
        let ab2 = resultant(&a, &b, Axis::X);
        assert!(ba == ab2 || ba == -&ab2);
    }

    #[test]
    fn first_subresultant_gives_common_root() {
        // a = (y - x)(y - 2)(y + 1), b = (y - x)(y - 3): gcd y - x
        let yx = p("y - x").to_integer().0;
        let a = &(&yx * &p("y - 2").to_integer().0) * &p("y + 1").to_integer().0;
        let b = &yx * &p("y - 3").to_integer().0;
        let (s11, s10) = subresultant_1(&a, &b);
        // at x = 5: root y = 5 = -s10/s11
        let x = rat(5, 1);
        let y = -s10.eval(&x) / s11.eval(&x);
        assert_eq!(y, rat(5, 1));
    }
}
