//! Auxiliary curves through batches of points (exact nullspace of the
//! evaluation matrix), greedy coverings of the points on an arc, and
//! per-arc zero counts of a low-degree polynomial.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arcs::{ArcDecomposition, Location};
use crate::bipoly::{mu, BiPoly, MonomialBasis};
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::points::RationalPoint;
use crate::solve::{common_zeros_z, Rect};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxiliaryCurve {
    pub k: usize,
    pub poly: BiPoly,
    pub support: Vec<RationalPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Covering {
    pub k: usize,
    pub curves: Vec<AuxiliaryCurve>,
    pub uncovered: Vec<RationalPoint>,
    #[serde(rename = "N")]
    pub n: usize,
}

/// Row of monomial values at a point, scaled to integers.
fn evaluation_row(basis: &MonomialBasis, pt: &RationalPoint) -> Vec<BigInt> {
    let k = basis.k;
    let (a, b) = (pt.x.numer(), pt.x.denom());
    let (c, e) = (pt.y.numer(), pt.y.denom());
    basis
        .entries
        .iter()
        .map(|&(i, j)| {
            let (i, j) = (i as usize, j as usize);
            num_traits::pow(a.clone(), i) * num_traits::pow(b.clone(), k - i) * num_traits::pow(c.clone(), j) * num_traits::pow(e.clone(), k - j)
        })
        .collect()
}

/// A kernel vector of an integer matrix with `ncols` columns, by
/// fraction-free elimination; the first non-pivot column is set to one.
pub fn integer_kernel_vector(mut m: Vec<Vec<BigInt>>, ncols: usize) -> Option<Vec<BigInt>> {
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut v = vec![BigRational::zero(); ncols];
    v[free] = BigRational::one();
    for (t, &pc) in pivots.iter().enumerate().rev() {
        let s: BigRational = (pc + 1..ncols).map(|j| BigRational::from_integer(m[t][j].clone()) * &v[j]).sum();
        v[pc] = -s / BigRational::from_integer(m[t][pc].clone());
    }
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    Some(ints.into_iter().map(|c| c / &g).collect())
}

fn check_distinct(points: &[RationalPoint]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for p in points {
        if !seen.insert((&p.x, &p.y)) {
            return Err(Error::DuplicatePoint(format!("({}, {})", p.x, p.y)));
        }
    }
    Ok(())
}

fn fit_unchecked(points: &[RationalPoint], k: usize) -> Option<AuxiliaryCurve> {
    let basis = MonomialBasis::new(k);
    let rows = points.iter().map(|p| evaluation_row(&basis, p)).collect();
    let v = integer_kernel_vector(rows, basis.len())?;
    let poly = BiPoly::from_terms(
        basis.entries.iter().zip(v).map(|(&e, c)| (e, BigRational::from_integer(c))),
    );
    Some(AuxiliaryCurve { k, poly, support: points.to_vec() })
}

/// A nonzero integer polynomial of degree at most `k` vanishing at every
/// point, or `None` when the points impose `mu(k)` independent conditions.
pub fn fit_curve(points: &[RationalPoint], k: usize) -> Result<Option<AuxiliaryCurve>> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    check_distinct(points)?;
    Ok(fit_unchecked(points, k))
}

/// Greedy covering: each curve takes the longest run of consecutive points
/// (in the given order) that still admits a fit.
pub fn cover_arc_points(points: &[RationalPoint], k: usize) -> Result<Covering> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    check_distinct(points)?;
    let mut curves = Vec::new();
    let mut i = 0;
    let always = mu(k) - 1;
    while i < points.len() {
        let rest = points.len() - i;
        // Fitting is monotone in the run length: subsets of fittable sets fit.
        let (mut good, mut bad) = (always.min(rest).max(1), rest + 1);
        if fit_unchecked(&points[i..i + rest], k).is_some() {
            good = rest;
        } else {
            while bad - good > 1 {
                let mid = (good + bad) / 2;
                if fit_unchecked(&points[i..i + mid], k).is_some() {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
        }
        curves.push(fit_unchecked(&points[i..i + good], k).expect("run admits a fit"));
        i += good;
    }
    let n = curves.len();
    Ok(Covering { k, curves, uncovered: Vec::new(), n })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChebyshevCertificate {
    pub arc: usize,
    pub k: usize,
    pub q: BiPoly,
    pub count: usize,
    pub bound: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroCensus {
    /// Zeros of `q` on each open arc.
    pub per_arc: Vec<usize>,
    /// Zeros of `q` that are split points.
    pub at_split_points: usize,
    /// All common zeros of the curve and `q` in the closed unit box.
    pub in_box: usize,
}

/// Assigns every common zero of the curve and `q` in the unit box to an
/// arc or a split point.
pub fn zero_census(dec: &ArcDecomposition, q: &BiPoly) -> Result<ZeroCensus> {
    let mut census = ZeroCensus { per_arc: vec![0; dec.arcs.len()], at_split_points: 0, in_box: 0 };
    if q.is_zero() {
        return Err(Error::CommonComponent);
    }
    if q.is_constant() {
        return Ok(census);
    }
    let zeros = common_zeros_z(dec.curve.zpoly(), &q.to_primitive_zbi(), Some(&Rect::unit()))?;
    let located: Vec<Option<Location>> = zeros.par_iter().map(|z| dec.locate(z)).collect::<Result<_>>()?;
    census.in_box = zeros.len();
    for loc in located {
        match loc {
            Some(Location::OnArc(a)) => census.per_arc[a] += 1,
            Some(Location::Split(_)) => census.at_split_points += 1,
            None => return Err(Error::CertificationFailure("box zero outside the box".into())),
        }
    }
    Ok(census)
}

/// Number of distinct common zeros of the curve and `q` on the open arc.
pub fn count_intersections_on_arc(dec: &ArcDecomposition, q: &BiPoly, arc: usize) -> Result<usize> {
    if q.is_zero() {
        return Err(Error::CommonComponent);
    }
    if q.is_constant() {
        return Ok(0);
    }
    let zeros = common_zeros_z(dec.curve.zpoly(), &q.to_primitive_zbi(), Some(&dec.arc_rect(arc)))?;
    let mut n = 0;
    for z in &zeros {
        if dec.locate(z)? == Some(Location::OnArc(arc)) {
            n += 1;
        }
    }
    Ok(n)
}

/// One certificate per arc that `q` has fewer than `mu(k)` zeros on it.
pub fn chebyshev_certify(dec: &ArcDecomposition, q: &BiPoly) -> Result<Vec<ChebyshevCertificate>> {
    if q.total_degree().unwrap_or(0) as usize > dec.k {
        return Err(Error::Precondition(format!("deg q exceeds k = {}", dec.k)));
    }
    let census = zero_census(dec, q)?;
    let bound = mu(dec.k);
    let certs: Vec<ChebyshevCertificate> = census
        .per_arc
        .iter()
        .enumerate()
        .map(|(arc, &count)| ChebyshevCertificate { arc, k: dec.k, q: q.clone(), count, bound })
        .collect();
    if let Some(bad) = certs.iter().find(|c| c.count >= bound) {
        let bundle = serde_json::json!({
            "curve": dec.curve.defining().to_string(),
            "k": dec.k,
            "q": q.to_string(),
            "arc": dec.arcs[bad.arc],
            "count": bad.count,
        });
        return Err(Error::CertificateViolated(bundle.to_string()));
    }
    Ok(certs)
}

/// Whether the real common zeros of the curve and `q` number at most `d * deg q`.
pub fn bezout_global_check(curve: &PlaneCurve, q: &BiPoly) -> Result<bool> {
    if q.is_zero() {
        return Err(Error::CommonComponent);
    }
    let Some(dq) = q.total_degree().filter(|&g| g > 0) else { return Ok(true) };
    let zeros = common_zeros_z(curve.zpoly(), &q.to_primitive_zbi(), None)?;
    Ok(zeros.len() as u64 <= curve.degree() as u64 * dq as u64)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::decompose_arcs;

    fn q(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    fn pt(x: &str, y: &str) -> RationalPoint {
        RationalPoint::new(q(x), q(y))
    }

    fn parabola_points(n: usize) -> Vec<RationalPoint> {
        (1..=n as i64)
            .map(|i| {
                let x = BigRational::new(i.into(), (n as i64 + 1).into());
                RationalPoint::new(x.clone(), &x * &x)
            })
            .collect()
    }

    #[test]
    fn parabola_fit_is_y_minus_x_squared() {
        let pts = parabola_points(5);
        let c = fit_curve(&pts, 2).unwrap().unwrap();
        let target = BiPoly::parse("y - x^2").unwrap();
        let ratio = c.poly.coeff(0, 1);
        assert!(!ratio.is_zero());
        assert_eq!(c.poly, target.scale(&ratio));
        for p in &pts {
            assert!(c.poly.eval(&p.x, &p.y).is_zero());
        }
    }

    #[test]
    fn six_general_points_do_not_fit_a_conic() {
        let pts = vec![pt("0", "0"), pt("1", "0"), pt("0", "1"), pt("1", "1"), pt("2", "3"), pt("3", "7")];
        assert!(fit_curve(&pts, 2).unwrap().is_none());
    }

    #[test]
    fn duplicates_rejected() {
        let pts = vec![pt("1/2", "1/3"), pt("1/2", "1/3")];
        assert!(matches!(fit_curve(&pts, 1), Err(Error::DuplicatePoint(_))));
    }

    #[test]
    fn coverings() {
        assert_eq!(cover_arc_points(&parabola_points(7), 2).unwrap().n, 1);
        let cubic: Vec<RationalPoint> = (1..=6i64)
            .map(|i| {
                let x = BigRational::new(i.into(), 7.into());
                RationalPoint::new(x.clone(), &(&x * &x) * &x)
            })
            .collect();
        let cov = cover_arc_points(&cubic, 2).unwrap();
        assert_eq!(cov.n, 2);
        for c in &cov.curves {
            for p in &c.support {
                assert!(c.poly.eval(&p.x, &p.y).is_zero());
            }
        }
    }

    #[test]
    fn circle_line_counts() {
        let curve = PlaneCurve::parse("x^2 + y^2 - 1").unwrap();
        let dec = decompose_arcs(&curve, 1, 2).unwrap();
        let line = BiPoly::parse("y - 1/2").unwrap();
        let census = zero_census(&dec, &line).unwrap();
        assert_eq!(census.in_box, 1);
        let total: usize = (0..dec.arcs.len()).map(|a| count_intersections_on_arc(&dec, &line, a).unwrap()).sum();
        assert_eq!(total + census.at_split_points, 1);
        let certs = chebyshev_certify(&dec, &line).unwrap();
        assert!(certs.iter().all(|c| c.count < c.bound));
        assert!(bezout_global_check(&curve, &line).unwrap());
    }

    #[test]
    fn parabola_line_count() {
        let curve = PlaneCurve::parse("y - x^2").unwrap();
        let dec = decompose_arcs(&curve, 1, 2).unwrap();
        let line = BiPoly::parse("y - 1/2").unwrap();
        let census = zero_census(&dec, &line).unwrap();
        assert_eq!(census.per_arc.iter().sum::<usize>(), 1);
    }
}
