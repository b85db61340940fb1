//! Rational and integral points of bounded height, symmetry reduction to
//! the unit box, and a small integral-point counter for hypersurfaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipoly::{Axis, BiPoly};
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::parse::{parse_sparse, SparsePoly};
use crate::rational::{rational_height, serde_rational, simplest_between};
use crate::roots::isolate_closed;
use crate::solve::Rect;
use crate::modp;
use crate::zbipoly::ZBiPoly;
use crate::zpoly::ZPoly;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RationalPoint {
    #[serde(with = "serde_rational")]
    pub x: BigRational,
    #[serde(with = "serde_rational")]
    pub y: BigRational,
    pub height: u64,
}

impl RationalPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        let h = rational_height(&x).max(rational_height(&y));
        RationalPoint { x, y, height: h.to_u64().unwrap_or(u64::MAX) }
    }
}

fn height_ok(q: &BigRational, max_num: &BigInt, max_den: &BigInt) -> bool {
    q.numer().abs() <= *max_num && q.denom() <= max_den
}

/// Rational roots `p/q` of `f` in `[lo, hi]` with `|p| <= max_num` and
/// `q <= max_den`. Each real root is isolated and then narrowed until its
/// interval is too short to hold two admissible fractions.
pub fn bounded_rational_roots(
    f: &ZPoly,
    lo: &BigRational,
    hi: &BigRational,
    max_num: &BigInt,
    max_den: &BigInt,
) -> Vec<BigRational> {
    let mut out = Vec::new();
    if f.is_zero() || lo > hi {
        return out;
    }
    // Bisection below tracks sign changes, which repeated roots lack.
    let f = &f.square_free_part();
    let gap = BigRational::new(BigInt::one(), BigInt::from(2) * max_den * max_den);
    for iv in isolate_closed(f, lo, hi) {
        let (mut a, mut b) = (iv.lo, iv.hi);
        loop {
            let c = simplest_between(&a, &b);
            if c.denom() > max_den {
                break;
            }
            if f.sign_at(&c) == 0 {
                if height_ok(&c, max_num, max_den) {
                    out.push(c);
                }
                break;
            }
            if &b - &a < gap {
                break;
            }
            let m = (&a + &b) / BigRational::from_integer(2.into());
            let sm = f.sign_at(&m);
            if sm == 0 {
                if height_ok(&m, max_num, max_den) {
                    out.push(m);
                }
                break;
            }
            if f.sign_at(&a) * sm < 0 {
                b = m;
            } else {
                a = m;
            }
        }
    }
    out
}

/// Reduced fractions `a/b` with `|a|, b <= h` inside `[lo, hi]`, increasing.
pub fn fractions_of_height(h: u64, lo: &BigRational, hi: &BigRational) -> Vec<BigRational> {
    let mut out = Vec::new();
    for b in 1..=h as i64 {
        let bb = BigRational::from_integer(b.into());
        let a_lo = (lo * &bb).ceil().to_integer().max(BigInt::from(-(h as i64)));
        let a_hi = (hi * &bb).floor().to_integer().min(BigInt::from(h as i64));
        let (Some(a_lo), Some(a_hi)) = (a_lo.to_i64(), a_hi.to_i64()) else { continue };
        for a in a_lo..=a_hi {
            if a.gcd(&b) == 1 {
                out.push(BigRational::new(a.into(), b.into()));
            }
        }
    }
    out.sort();
    out
}

fn all_heights(h: u64) -> (BigRational, BigRational) {
    let hh = BigRational::from_integer(BigInt::from(h));
    (-hh.clone(), hh)
}

const SIEVE_PRIMES: [u64; 24] = [
    211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311, 313, 317, 331, 337, 347,
    349,
];

/// Per-prime tables of the residues `r` for which `P(r, y)` has a root in
/// `Z/p` or drops degree. A rational root `c/e` of `P(a/b, y)` has `e`
/// dividing the leading coefficient, so outside the degree-drop residues
/// it reduces to a root mod `p`.
struct FibreSieve {
    tables: Vec<(u64, Vec<bool>)>,
}

impl FibreSieve {
    fn new(p: &ZBiPoly) -> Self {
        if p.degree_y().unwrap_or(0) <= 1 {
            return FibreSieve { tables: Vec::new() };
        }
        let tables = SIEVE_PRIMES
            .par_iter()
            .map(|&q| {
                let rows: Vec<Vec<u64>> =
                    p.rows().iter().map(|r| r.coeffs().iter().map(|c| modp::reduce(c, q)).collect()).collect();
                let eval = |cs: &[u64], t: u64| cs.iter().rev().fold(0u64, |acc, &c| (acc * t + c) % q);
                let table = (0..q)
                    .map(|r| {
                        let cs: Vec<u64> = rows.iter().map(|row| eval(row, r)).collect();
                        *cs.last().expect("nonzero") == 0 || (0..q).any(|t| eval(&cs, t) == 0)
                    })
                    .collect();
                (q, table)
            })
            .collect();
        FibreSieve { tables }
    }

    fn may_have_root(&self, x0: &BigRational) -> bool {
        self.tables.iter().all(|(q, table)| {
            let b = modp::reduce(x0.denom(), *q);
            b == 0 || table[(modp::reduce(x0.numer(), *q) * modp::inv(b, *q) % q) as usize]
        })
    }
}

/// Rational points of height at most `h`, optionally within a closed box,
/// sorted by `(x, y)`.
pub fn enumerate_rational_points(curve: &PlaneCurve, h: u64, region: Option<&Rect>) -> Vec<RationalPoint> {
    assert!(h >= 1, "height bound must be positive");
    let (full_lo, full_hi) = all_heights(h);
    let (x_lo, x_hi, y_lo, y_hi) = match region {
        Some(r) => (
            r.x_lo.clone().max(full_lo.clone()),
            r.x_hi.clone().min(full_hi.clone()),
            r.y_lo.clone().max(full_lo),
            r.y_hi.clone().min(full_hi),
        ),
        None => (full_lo.clone(), full_hi.clone(), full_lo, full_hi),
    };
    let bound = BigInt::from(h);
    let p = curve.zpoly();
    let sieve = FibreSieve::new(p);
    let xs = fractions_of_height(h, &x_lo, &x_hi);
    let mut pts: Vec<RationalPoint> = xs
        .par_iter()
        .filter(|x0| sieve.may_have_root(x0))
        .flat_map_iter(|x0| {
            let f = p.specialize_x(x0);
            let ys = if f.is_zero() {
                fractions_of_height(h, &y_lo, &y_hi)
            } else {
                bounded_rational_roots(&f, &y_lo, &y_hi, &bound, &bound)
            };
            ys.into_iter().map(move |y| RationalPoint::new(x0.clone(), y))
        })
        .collect();
    pts.sort();
    pts
}

/// Points with integer coordinates, `|x|, |y| <= h`.
pub fn enumerate_integral_points(curve: &PlaneCurve, h: u64) -> Vec<RationalPoint> {
    assert!(h >= 1, "height bound must be positive");
    let (lo, hi) = all_heights(h);
    let bound = BigInt::from(h);
    let p = curve.zpoly();
    let hi_i = h as i64;
    let mut pts: Vec<RationalPoint> = (-hi_i..=hi_i)
        .into_par_iter()
        .flat_map_iter(|a| {
            let x0 = BigRational::from_integer(a.into());
            let f = p.specialize_x(&x0);
            let ys: Vec<BigRational> = if f.is_zero() {
                (-hi_i..=hi_i).map(|b| BigRational::from_integer(b.into())).collect()
            } else {
                bounded_rational_roots(&f, &lo, &hi, &bound, &BigInt::one())
            };
            ys.into_iter().map(move |y| RationalPoint::new(x0.clone(), y))
        })
        .collect();
    pts.sort();
    pts
}

/// Reference enumeration: every pair of fractions of height at most `h`,
/// tested by exact evaluation. Quadratic in the number of fractions.
pub fn naive_rational_points(curve: &PlaneCurve, h: u64) -> Vec<RationalPoint> {
    let (lo, hi) = all_heights(h);
    let fr = fractions_of_height(h, &lo, &hi);
    let p = curve.defining();
    let mut out = Vec::new();
    for x in &fr {
        for y in &fr {
            if p.eval(x, y).is_zero() {
                out.push(RationalPoint::new(x.clone(), y.clone()));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisAction {
    Identity,
    Negate,
    Invert,
    NegateInvert,
}

impl AxisAction {
    pub const ALL: [AxisAction; 4] = [AxisAction::Identity, AxisAction::Negate, AxisAction::Invert, AxisAction::NegateInvert];

    /// Image of a coordinate; `None` when inverting zero.
    pub fn apply(self, t: &BigRational) -> Option<BigRational> {
        match self {
            AxisAction::Identity => Some(t.clone()),
            AxisAction::Negate => Some(-t),
            AxisAction::Invert => (!t.is_zero()).then(|| t.recip()),
            AxisAction::NegateInvert => (!t.is_zero()).then(|| -t.recip()),
        }
    }

    fn transform(self, p: &BiPoly, axis: Axis) -> BiPoly {
        match self {
            AxisAction::Identity => p.clone(),
            AxisAction::Negate => p.negate_var(axis),
            AxisAction::Invert => p.invert_var(axis),
            AxisAction::NegateInvert => p.negate_var(axis).invert_var(axis),
        }
    }

    /// The action sending `t` (not 0 or +-1) into `(0, 1)`.
    pub fn into_unit(t: &BigRational) -> AxisAction {
        let one = BigRational::one();
        match (t.is_positive(), t.abs() < one) {
            (true, true) => AxisAction::Identity,
            (false, true) => AxisAction::Negate,
            (true, false) => AxisAction::Invert,
            (false, false) => AxisAction::NegateInvert,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetryMap {
    pub x: AxisAction,
    pub y: AxisAction,
}

impl SymmetryMap {
    pub fn identity() -> Self {
        SymmetryMap { x: AxisAction::Identity, y: AxisAction::Identity }
    }

    pub fn all() -> Vec<SymmetryMap> {
        let mut v = Vec::with_capacity(16);
        for x in AxisAction::ALL {
            for y in AxisAction::ALL {
                v.push(SymmetryMap { x, y });
            }
        }
        v
    }

    /// Every axis action is an involution, so each map is its own inverse.
    pub fn apply(&self, pt: &RationalPoint) -> Option<RationalPoint> {
        Some(RationalPoint::new(self.x.apply(&pt.x)?, self.y.apply(&pt.y)?))
    }

    /// Defining polynomial of the image curve, denominators cleared and content removed.
    pub fn transform(&self, p: &BiPoly) -> BiPoly {
        let q = self.y.transform(&self.x.transform(p, Axis::X), Axis::Y);
        q.strip_monomial_factor().primitive_integer()
    }

    pub fn label(&self) -> String {
        let name = |a: AxisAction, v: &str| match a {
            AxisAction::Identity => v.to_string(),
            AxisAction::Negate => format!("-{v}"),
            AxisAction::Invert => format!("1/{v}"),
            AxisAction::NegateInvert => format!("-1/{v}"),
        };
        format!("({}, {})", name(self.x, "x"), name(self.y, "y"))
    }
}

/// The sixteen images of the curve under coordinatewise `t -> -t` and `t -> 1/t`.
pub fn symmetry_orbit(curve: &PlaneCurve) -> Result<Vec<(SymmetryMap, PlaneCurve)>> {
    SymmetryMap::all()
        .into_iter()
        .map(|m| Ok((m, PlaneCurve::new_unchecked(&m.transform(curve.defining()))?)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxCount {
    /// Points with a coordinate in `{0, 1, -1}`.
    pub edge_points: usize,
    pub per_map: Vec<(SymmetryMap, usize)>,
    pub total: usize,
}

/// Points of height at most `h` with some coordinate in `{-1, 0, 1}`.
pub fn special_coordinate_points(curve: &PlaneCurve, h: u64) -> Vec<RationalPoint> {
    let (lo, hi) = all_heights(h);
    let bound = BigInt::from(h);
    let mut out = Vec::new();
    for axis in [Axis::X, Axis::Y] {
        for v in [-1i64, 0, 1] {
            let t = BigRational::from_integer(v.into());
            let f = match axis {
                Axis::X => curve.zpoly().specialize_x(&t),
                Axis::Y => curve.zpoly().specialize_y(&t),
            };
            let others = if f.is_zero() {
                fractions_of_height(h, &lo, &hi)
            } else {
                bounded_rational_roots(&f, &lo, &hi, &bound, &bound)
            };
            for s in others {
                out.push(match axis {
                    Axis::X => RationalPoint::new(t.clone(), s),
                    Axis::Y => RationalPoint::new(s, t.clone()),
                });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Total number of points of height at most `h`, assembled from unit-box
/// counts of the sixteen symmetric images. `box_counter` must return the
/// points of height at most `h` of the given curve in the closed unit box.
pub fn count_via_box<F>(curve: &PlaneCurve, h: u64, box_counter: F) -> Result<BoxCount>
where
    F: Fn(&PlaneCurve, u64) -> Result<Vec<RationalPoint>>,
{
    let edge_points = special_coordinate_points(curve, h).len();
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut per_map = Vec::with_capacity(16);
    let mut total = edge_points;
    for (map, image) in symmetry_orbit(curve)? {
        let pts = box_counter(&image, h)?;
        let n = pts.iter().filter(|p| p.x != zero && p.x != one && p.y != zero && p.y != one).count();
        per_map.push((map, n));
        total += n;
    }
    Ok(BoxCount { edge_points, per_map, total })
}

/// Brute-force box counter for [`count_via_box`].
pub fn brute_box_counter(curve: &PlaneCurve, h: u64) -> Result<Vec<RationalPoint>> {
    Ok(enumerate_rational_points(curve, h, Some(&Rect::unit())))
}

#[derive(Clone, Debug, Serialize)]
pub struct HypersurfaceCount {
    pub total: u64,
    /// `(c, #{x : x_1 = c})` for each value of the first coordinate.
    pub slices: Vec<(i64, u64)>,
}

/// A polynomial in three variables, written with `x1, x2, x3` or `x, y, z`.
pub fn parse_trivariate(text: &str) -> Result<SparsePoly> {
    parse_sparse(text, &["x1", "x2", "x3"]).or_else(|_| parse_sparse(text, &["x", "y", "z"]))
}

fn trivariate_integer(f: &SparsePoly) -> Result<Vec<(Vec<u32>, BigInt)>> {
    if f.is_empty() {
        return Err(Error::IdenticallyZero);
    }
    let l = crate::rational::denominators_lcm(f.values());
    Ok(f.iter()
        .map(|(e, c)| {
            let mut e = e.clone();
            e.resize(3, 0);
            (e, (c * BigRational::from_integer(l.clone())).to_integer())
        })
        .collect())
}

/// Integer points with `|x_i| <= h` on `f = 0`, by slicing along the first
/// two coordinates and solving for the third.
pub fn enumerate_hypersurface_points(f: &SparsePoly, h: u64) -> Result<HypersurfaceCount> {
    let terms = trivariate_integer(f)?;
    let hi = h as i64;
    let deg3 = terms.iter().map(|(e, _)| e[2] as usize).max().unwrap_or(0);
    let (lo_r, hi_r) = all_heights(h);
    let bound = BigInt::from(h);
    let slices: Vec<(i64, u64)> = (-hi..=hi)
        .into_par_iter()
        .map(|a| {
            let mut n = 0u64;
            for b in -hi..=hi {
                let mut coeffs = vec![BigInt::zero(); deg3 + 1];
                for (e, c) in &terms {
                    coeffs[e[2] as usize] += c * num_traits::pow(BigInt::from(a), e[0] as usize) * num_traits::pow(BigInt::from(b), e[1] as usize);
                }
                let g = ZPoly::new(coeffs);
                n += if g.is_zero() {
                    2 * h + 1
                } else {
                    bounded_rational_roots(&g, &lo_r, &hi_r, &bound, &BigInt::one()).len() as u64
                };
            }
            (a, n)
        })
        .collect();
    Ok(HypersurfaceCount { total: slices.iter().map(|s| s.1).sum(), slices })
}

/// Triple loop with exact evaluation.
pub fn count_hypersurface_direct(f: &SparsePoly, h: u64) -> Result<u64> {
    let terms = trivariate_integer(f)?;
    let hi = h as i64;
    let mut n = 0;
    for a in -hi..=hi {
        for b in -hi..=hi {
            for c in -hi..=hi {
                let v: BigInt = terms
                    .iter()
                    .map(|(e, k)| {
                        k * num_traits::pow(BigInt::from(a), e[0] as usize)
                            * num_traits::pow(BigInt::from(b), e[1] as usize)
                            * num_traits::pow(BigInt::from(c), e[2] as usize)
                    })
                    .sum();
                if v.is_zero() {
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn curve(s: &str) -> PlaneCurve {
        PlaneCurve::parse(s).unwrap()
    }

    #[test]
    fn named_counts() {
        assert_eq!(enumerate_rational_points(&curve("y - x^2"), 4, None).len(), 7);
        assert_eq!(enumerate_rational_points(&curve("x^2 + y^2 - 1"), 5, None).len(), 12);
        assert_eq!(enumerate_rational_points(&curve("x^2 + y^2 - 1"), 2, None).len(), 4);
        assert!(enumerate_rational_points(&curve("x^2 + y^2 - 3"), 10, None).is_empty());
    }

    #[test]
    fn integral_counts() {
        assert_eq!(enumerate_integral_points(&curve("y - x^2"), 4).len(), 5);
        assert_eq!(enumerate_integral_points(&curve("x^2 + y^2 - 1"), 1).len(), 4);
        assert_eq!(enumerate_integral_points(&curve("x*y - 6"), 6).len(), 8);
    }

    #[test]
    fn box_restriction() {
        let pts = enumerate_rational_points(&curve("x^2 + y^2 - 1"), 5, Some(&Rect::unit()));
        let xs: Vec<_> = pts.iter().map(|p| p.x.clone()).collect();
        assert_eq!(xs, vec![rat(0, 1), rat(3, 5), rat(4, 5), rat(1, 1)]);
    }

    #[test]
    fn orbit_examples() {
        let orbit = symmetry_orbit(&curve("y - x^2")).unwrap();
        assert_eq!(orbit.len(), 16);
        assert_eq!(orbit[0].1.defining(), curve("y - x^2").defining());
        let neg_x = SymmetryMap { x: AxisAction::Negate, y: AxisAction::Identity };
        assert_eq!(neg_x.transform(&"y - x^2".parse().unwrap()), "y - x^2".parse().unwrap());
        let inv_y = SymmetryMap { x: AxisAction::Identity, y: AxisAction::Invert };
        assert_eq!(inv_y.transform(&"y - x^2".parse().unwrap()), "1 - x^2 y".parse().unwrap());
    }

    #[test]
    fn via_box_matches_direct() {
        for (s, h, n) in [("x^2 + y^2 - 1", 5, 12), ("y - x^2", 4, 7), ("x^2 + y^2 - 3", 10, 0)] {
            let c = curve(s);
            assert_eq!(count_via_box(&c, h, brute_box_counter).unwrap().total, n, "{s}");
        }
    }

    #[test]
    fn hypersurface_examples() {
        for (s, h, n) in [("x1 + x2 + x3", 1, 7), ("x1^2 + x2^2 + x3^2 - 3", 1, 8), ("x1 x2 x3 - 1", 2, 4)] {
            let f = parse_trivariate(s).unwrap();
            assert_eq!(enumerate_hypersurface_points(&f, h).unwrap().total, n, "{s}");
            assert_eq!(count_hypersurface_direct(&f, h).unwrap(), n, "{s}");
        }
    }
}
