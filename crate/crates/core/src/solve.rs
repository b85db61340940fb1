//! Real common zeros of two bivariate polynomials.
//!
//! Candidates for each coordinate come from the two resultants. A shear
//! `t = x + s*y` puts the solutions in generic position, so that every root
//! `tau` of `Res_y` in the sheared coordinates carries exactly one solution,
//! with `y = -s10(tau)/s11(tau)` read off the first subresultant. Enclosures
//! of that expression are matched against the isolated coordinate roots.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebraic::AlgebraicReal;
use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::interval::{eval_zpoly, RatInterval};
use crate::rational::{serde_rational, BigRational};
use crate::resultant::{res_y, subresultant_1};
use crate::roots::{isolate_squarefree, IsolatingInterval, Range};
use crate::zbipoly::ZBiPoly;
use crate::zpoly::ZPoly;

/// Closed rectangle `[x_lo, x_hi] x [y_lo, y_hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    #[serde(with = "serde_rational")]
    pub x_lo: BigRational,
    #[serde(with = "serde_rational")]
    pub x_hi: BigRational,
    #[serde(with = "serde_rational")]
    pub y_lo: BigRational,
    #[serde(with = "serde_rational")]
    pub y_hi: BigRational,
}

impl Rect {
    pub fn new(x_lo: BigRational, x_hi: BigRational, y_lo: BigRational, y_hi: BigRational) -> Self {
        assert!(x_lo <= x_hi && y_lo <= y_hi, "empty rectangle");
        Rect { x_lo, x_hi, y_lo, y_hi }
    }

    pub fn square(lo: i64, hi: i64) -> Self {
        let (a, b) = (BigRational::from_integer(lo.into()), BigRational::from_integer(hi.into()));
        Rect::new(a.clone(), b.clone(), a, b)
    }

    pub fn unit() -> Self {
        Rect::square(0, 1)
    }

    pub fn contains_rational(&self, x: &BigRational, y: &BigRational) -> bool {
        *x >= self.x_lo && *x <= self.x_hi && *y >= self.y_lo && *y <= self.y_hi
    }

    pub fn contains(&self, p: &AlgPoint) -> bool {
        p.0.cmp_rational(&self.x_lo) != Ordering::Less
            && p.0.cmp_rational(&self.x_hi) != Ordering::Greater
            && p.1.cmp_rational(&self.y_lo) != Ordering::Less
            && p.1.cmp_rational(&self.y_hi) != Ordering::Greater
    }
}

pub type AlgPoint = (AlgebraicReal, AlgebraicReal);

/// Orders points by `x`, then `y`, exactly.
pub fn cmp_points(a: &AlgPoint, b: &AlgPoint) -> Ordering {
    a.0.cmp_exact(&b.0).then_with(|| a.1.cmp_exact(&b.1))
}

pub fn points_equal(a: &AlgPoint, b: &AlgPoint) -> bool {
    cmp_points(a, b) == Ordering::Equal
}

/// Isolated real common zeros of `p` and `q` in `region` (the whole plane if
/// `None`), sorted by `x` then `y`.
pub fn common_zeros(p: &BiPoly, q: &BiPoly, region: Option<&Rect>) -> Result<Vec<AlgPoint>> {
    common_zeros_z(&p.to_integer().0, &q.to_integer().0, region)
}

/// Reduce `q` modulo `p` in `y` when that lowers its degree; the resultant
/// picks up only extra factors of `lc_y(p)`.
fn reduced_res_y(p: &ZBiPoly, q: &ZBiPoly) -> ZPoly {
    match (p.degree_y(), q.degree_y()) {
        (Some(m), Some(n)) if m >= 1 && n >= m => {
            let r = q.pseudo_rem_y(p);
            if r.is_zero() {
                ZPoly::zero()
            } else {
                res_y(p, &r)
            }
        }
        _ => res_y(p, q),
    }
}

struct Coordinate {
    poly: ZPoly,
    roots: Vec<IsolatingInterval>,
    range: Option<(BigRational, BigRational)>,
}

enum Match {
    Accept(usize),
    Reject,
    Unknown,
}

impl Coordinate {
    fn new(res: &ZPoly, bounds: Option<(&BigRational, &BigRational)>) -> Coordinate {
        let poly = res.square_free_part();
        let range = bounds.map(|(a, b)| (a - BigRational::one(), b + BigRational::one()));
        let r = match &range {
            Some((a, b)) => Range::open(a.clone(), b.clone()),
            None => Range::real_line(),
        };
        let roots = isolate_squarefree(&poly, &r);
        Coordinate { poly, roots, range }
    }

    fn classify(&self, e: &RatInterval) -> Match {
        let hits: Vec<usize> = (0..self.roots.len())
            .filter(|&i| e.intersects(&RatInterval::new(self.roots[i].lo.clone(), self.roots[i].hi.clone())))
            .collect();
        if hits.is_empty() {
            return Match::Reject;
        }
        let inside = match &self.range {
            Some((a, b)) => e.lo > *a && e.hi < *b,
            None => true,
        };
        if hits.len() == 1 && inside {
            Match::Accept(hits[0])
        } else {
            Match::Unknown
        }
    }

    fn value(&self, i: usize) -> AlgebraicReal {
        let mut a = AlgebraicReal::from_squarefree(self.poly.clone(), self.roots[i].clone());
        a.try_rationalize(24);
        a
    }
}

fn shear_sequence() -> impl Iterator<Item = i64> {
    (0..40).map(|n: i64| if n % 2 == 1 { (n + 1) / 2 } else { -(n / 2) })
}

/// Integer-coefficient version of [`common_zeros`].
pub fn common_zeros_z(p: &ZBiPoly, q: &ZBiPoly, region: Option<&Rect>) -> Result<Vec<AlgPoint>> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::CommonComponent);
    }
    if p.total_degree() == Some(0) || q.total_degree() == Some(0) {
        return Ok(Vec::new());
    }
    let rx = reduced_res_y(p, q);
    let ry = reduced_res_y(&p.transpose(), &q.transpose());
    if rx.is_zero() || ry.is_zero() {
        return Err(Error::CommonComponent);
    }
    let xs = Coordinate::new(&rx, region.map(|r| (&r.x_lo, &r.x_hi)));
    let ys = Coordinate::new(&ry, region.map(|r| (&r.y_lo, &r.y_hi)));
    if xs.roots.is_empty() || ys.roots.is_empty() {
        return Ok(Vec::new());
    }

    for s in shear_sequence() {
        let a = p.shear(s);
        if !a.lc_y().is_constant() {
            continue;
        }
        let m = a.degree_y().expect("nonzero");
        let mut b = q.shear(s);
        if b.degree_y().expect("nonzero") >= m {
            b = b.pseudo_rem_y(&a);
        }
        if b.is_zero() {
            return Err(Error::CommonComponent);
        }
        let n = b.degree_y().unwrap();
        if n == 0 && b.total_degree() == Some(0) {
            return Ok(Vec::new());
        }
        let (s11, s10) = if m == 1 {
            (a.rows()[1].clone(), a.rows()[0].clone())
        } else if n == 0 {
            continue;
        } else {
            subresultant_1(&a, &b)
        };
        let rs = res_y(&a, &b);
        if rs.is_zero() {
            return Err(Error::CommonComponent);
        }
        let rs = rs.square_free_part();
        if rs.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let t_range = match region {
            Some(r) => {
                let sb = BigRational::from_integer(BigInt::from(s));
                let (c1, c2) = (&sb * &r.y_lo, &sb * &r.y_hi);
                let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
                let margin = BigRational::new(BigInt::one(), BigInt::from(64));
                Range::open(&r.x_lo + lo - &margin, &r.x_hi + hi + margin)
            }
            None => Range::real_line(),
        };
        // Roots where the first subresultant degenerates carry a fibre gcd
        // of degree above one; those are handled exactly when rational.
        let g = rs.gcd(&s11);
        let mut special = Vec::new();
        let rs = if g.degree() == Some(0) {
            rs
        } else {
            let mut all_rational = true;
            for iv in isolate_squarefree(&g, &t_range) {
                let mut tau = AlgebraicReal::from_squarefree(g.clone(), iv);
                tau.try_rationalize(128);
                match tau.as_rational() {
                    Some(t) => special.push(t.clone()),
                    None => {
                        all_rational = false;
                        break;
                    }
                }
            }
            if !all_rational {
                continue;
            }
            rs.div_exact(&g).expect("gcd divides")
        };
        let mut out = Vec::new();
        for tau in &special {
            let fibre = a.specialize_x(tau).gcd(&b.specialize_x(tau)).square_free_part();
            for iv in isolate_squarefree(&fibre, &Range::real_line()) {
                let y = AlgebraicReal::from_squarefree(fibre.clone(), iv);
                if let Some(pt) = locate_fibre(tau, s, y, &xs, &ys)? {
                    if region.is_none_or(|r| r.contains(&pt)) {
                        out.push(pt);
                    }
                }
            }
        }
        for iv in isolate_squarefree(&rs, &t_range) {
            let mut tau = AlgebraicReal::from_squarefree(rs.clone(), iv);
            if let Some(pt) = locate(&mut tau, s, &s11, &s10, &xs, &ys)? {
                if region.is_none_or(|r| r.contains(&pt)) {
                    out.push(pt);
                }
            }
        }
        out.sort_by(cmp_points);
        return Ok(out);
    }
    Err(Error::CertificationFailure("no generic shear found for common_zeros".into()))
}

/// Matches the point `(tau - s*y, y)` of a rational fibre against the
/// coordinate roots.
fn locate_fibre(tau: &BigRational, s: i64, mut y: AlgebraicReal, xs: &Coordinate, ys: &Coordinate) -> Result<Option<AlgPoint>> {
    let sb = BigRational::from_integer(BigInt::from(s));
    let t = RatInterval::new(tau.clone(), tau.clone());
    let mut bits: u32 = 8;
    while bits <= 1 << 14 {
        if !y.interval().is_exact() {
            y.refine_in_place(&BigRational::new(BigInt::one(), BigInt::one() << bits));
        }
        let ey = y.enclosure();
        let ex = &t - &ey.scale(&sb);
        match (xs.classify(&ex), ys.classify(&ey)) {
            (Match::Reject, _) | (_, Match::Reject) => return Ok(None),
            (Match::Accept(i), Match::Accept(j)) => return Ok(Some((xs.value(i), ys.value(j)))),
            _ => {}
        }
        if y.interval().is_exact() {
            return Err(Error::CertificationFailure("exact fibre root did not resolve".into()));
        }
        bits *= 2;
    }
    Err(Error::CertificationFailure("refinement limit in common_zeros".into()))
}

fn locate(
    tau: &mut AlgebraicReal,
    s: i64,
    s11: &ZPoly,
    s10: &ZPoly,
    xs: &Coordinate,
    ys: &Coordinate,
) -> Result<Option<AlgPoint>> {
    let sb = BigRational::from_integer(BigInt::from(s));
    // Refine tau by exact bisection, doubling the precision between the
    // comparatively expensive interval evaluations.
    let mut bits: u32 = 8;
    while bits <= 1 << 14 {
        if !tau.interval().is_exact() {
            tau.refine_in_place(&BigRational::new(BigInt::one(), BigInt::one() << bits));
        }
        let t = tau.enclosure();
        let den = eval_zpoly(s11, &t);
        if let Some(ey) = (-&eval_zpoly(s10, &t)).div(&den) {
            let ex = &t - &ey.scale(&sb);
            match (xs.classify(&ex), ys.classify(&ey)) {
                (Match::Reject, _) | (_, Match::Reject) => return Ok(None),
                (Match::Accept(i), Match::Accept(j)) => return Ok(Some((xs.value(i), ys.value(j)))),
                _ => {}
            }
        }
        if tau.interval().is_exact() {
            return Err(Error::CertificationFailure("exact shear root did not resolve".into()));
        }
        bits *= 2;
    }
    Err(Error::CertificationFailure("refinement limit in common_zeros".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    fn approx(pts: &[AlgPoint]) -> Vec<(f64, f64)> {
        pts.iter().map(|(x, y)| (x.approx(), y.approx())).collect()
    }

    #[test]
    fn parabola_and_line() {
        let z = common_zeros(&p("y - x^2"), &p("y - x"), Some(&Rect::square(-2, 2))).unwrap();
        assert_eq!(z.len(), 2);
        assert_eq!(z[0].0.as_rational(), Some(&rat(0, 1)));
        assert_eq!(z[1].1.as_rational(), Some(&rat(1, 1)));
    }

    #[test]
    fn circle_and_diagonal() {
        let z = common_zeros(&p("x^2 + y^2 - 1"), &p("x - y"), Some(&Rect::unit())).unwrap();
        assert_eq!(z.len(), 1);
        let (x, y) = &z[0];
        assert_eq!(x.sign_of_zpoly(&ZPoly::from_i64(&[-1, 0, 2])), 0);
        assert_eq!(y.sign_of_zpoly(&ZPoly::from_i64(&[-1, 0, 2])), 0);
        assert!((x.approx() - 0.7071).abs() < 0.01);
    }

    #[test]
    fn concentric_circles_and_common_component() {
        assert!(common_zeros(&p("x^2 + y^2 - 1"), &p("x^2 + y^2 - 4"), Some(&Rect::square(-3, 3))).unwrap().is_empty());
        assert!(matches!(common_zeros(&p("y - x^2"), &p("2y - 2x^2"), None), Err(Error::CommonComponent)));
        assert!(matches!(common_zeros(&p("x*y - x"), &p("x^2 + x"), None), Err(Error::CommonComponent)));
    }

    #[test]
    fn points_sharing_coordinates() {
        // (x^2 - 1) and (y^2 - 1): four points sharing x and y values
        let z = common_zeros(&p("x^2 - 1"), &p("y^2 - 1"), None).unwrap();
        assert_eq!(approx(&z), vec![(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]);
        // circle and the hyperbola xy = 1/4: four points, symmetric
        let z = common_zeros(&p("x^2 + y^2 - 1"), &p("4x*y - 1"), None).unwrap();
        assert_eq!(z.len(), 4);
        for (x, y) in &z {
            assert!((4.0 * x.approx() * y.approx() - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn box_edges_are_closed() {
        let z = common_zeros(&p("x^2 + y^2 - 1"), &p("x"), Some(&Rect::unit())).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].1.as_rational(), Some(&rat(1, 1)));
        let z = common_zeros(&p("x^2 + y^2 - 1"), &p("y"), Some(&Rect::unit())).unwrap();
        assert_eq!(z.len(), 1);
    }

    #[test]
    fn singular_points_at_rational_locations() {
        let node = p("y^2 - x^2*(x + 1)");
        let dx = node.partial_derivative(crate::bipoly::Axis::X);
        let pts = common_zeros(&node, &dx, None).unwrap();
        assert_eq!(approx(&pts).len(), 3);
        assert!(pts.iter().any(|(x, y)| x.as_rational().is_some_and(|v| v == &BigRational::from_integer(0.into())) && y.as_rational().is_some()));
        let triple = p("x^3 + y^3 - x^3*y^3");
        let dy = triple.partial_derivative(crate::bipoly::Axis::Y);
        let pts = common_zeros(&triple, &dy, Some(&Rect::unit())).unwrap();
        assert_eq!(approx(&pts), vec![(0.0, 0.0)]);
    }
}
