//! The polynomial systems whose zeros on the curve cut it into arcs: the
//! Wronskian strata (with the singular locus) and the derivative-control
//! strata built from `P_x`, `P_y`, box lines and rescaled derivatives.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebraic::AlgebraicReal;
use crate::bipoly::{Axis, BiPoly};
use crate::curve::PlaneCurve;
use crate::differential::{rescaled_numerators_z, vanishes_on_curve, wronskians, TangentOperator};
use crate::error::Result;
use crate::solve::{cmp_points, common_zeros_z, points_equal, AlgPoint, Rect};
use crate::zbipoly::ZBiPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrataKind {
    Sigma,
    Pi,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrataEntry {
    pub role: String,
    pub poly: BiPoly,
    #[serde(skip)]
    pub z: ZBiPoly,
    pub vanishes_identically: bool,
}

impl StrataEntry {
    fn new(role: impl Into<String>, z: ZBiPoly, curve: &PlaneCurve) -> Self {
        let vanishes = z.is_zero() || (z.total_degree() != Some(0) && vanishes_on_curve(curve, &z));
        StrataEntry { role: role.into(), poly: BiPoly::from_zbi(&z), z, vanishes_identically: vanishes }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StrataPolys {
    pub kind: StrataKind,
    pub parameter: usize,
    pub entries: Vec<StrataEntry>,
}

impl StrataPolys {
    pub fn polys(&self) -> Vec<BiPoly> {
        self.entries.iter().map(|e| e.poly.clone()).collect()
    }

    /// `sum d * deg(entry)` over entries that can contribute isolated points.
    pub fn bezout_budget(&self, d: u32) -> u64 {
        let mut total = 0u64;
        for e in &self.entries {
            if e.vanishes_identically {
                continue;
            }
            if let Some(deg) = e.z.total_degree().filter(|&g| g > 0) {
                if self.kind == StrataKind::Sigma && e.role == "P_y" {
                    // P_x and P_y form one system; its zeros are counted once.
                    continue;
                }
                total += d as u64 * deg as u64;
            }
        }
        total
    }
}

/// `[P_x, P_y, W_1, ..., W_mu]`.
pub fn sigma_polys(curve: &PlaneCurve, k: usize) -> Result<StrataPolys> {
    let op = TangentOperator::new(curve);
    let w = wronskians(&op, k)?;
    let mut entries = vec![
        StrataEntry::new("P_x", curve.zpx().clone(), curve),
        StrataEntry::new("P_y", curve.zpy().clone(), curve),
    ];
    for (i, z) in w.z.into_iter().enumerate() {
        entries.push(StrataEntry { role: format!("W_{}", i + 1), poly: BiPoly::from_zbi(&z), z, vanishes_identically: false });
    }
    Ok(StrataPolys { kind: StrataKind::Sigma, parameter: k, entries })
}

/// `[P_x, P_y, P_x + P_y, P_x - P_y, x - 1, x + 1, y - 1, y + 1, y_x0..y_xr, x_y0..x_yr]`.
pub fn pi_polys(curve: &PlaneCurve, r: usize) -> Result<StrataPolys> {
    let op = TangentOperator::new(curve);
    let (px, py) = (curve.zpx().clone(), curve.zpy().clone());
    let lin = |s: &str| BiPoly::parse(s).expect("literal").to_integer().0;
    let mut entries = vec![
        StrataEntry::new("P_x", px.clone(), curve),
        StrataEntry::new("P_y", py.clone(), curve),
        StrataEntry::new("P_x+P_y", &px + &py, curve),
        StrataEntry::new("P_x-P_y", &px - &py, curve),
    ];
    for s in ["x - 1", "x + 1", "y - 1", "y + 1"] {
        entries.push(StrataEntry::new(s.replace(' ', ""), lin(s), curve));
    }
    for (axis, q, name) in [(Axis::X, "y", "y_x"), (Axis::Y, "x", "x_y")] {
        match rescaled_numerators_z(&op, &lin(q), axis, r) {
            Ok(nums) => {
                for (j, z) in nums.into_iter().enumerate() {
                    entries.push(StrataEntry::new(format!("{name}{j}"), z, curve));
                }
            }
            Err(_) => {
                // Degenerate axis: the curve is a union of lines along this axis.
                for j in 0..=r {
                    entries.push(StrataEntry {
                        role: format!("{name}{j}"),
                        poly: BiPoly::zero(),
                        z: ZBiPoly::zero(),
                        vanishes_identically: true,
                    });
                }
            }
        }
    }
    Ok(StrataPolys { kind: StrataKind::Pi, parameter: r, entries })
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitPoint {
    pub x: AlgebraicReal,
    pub y: AlgebraicReal,
    pub provenance: BTreeSet<String>,
}

impl SplitPoint {
    pub fn point(&self) -> AlgPoint {
        (self.x.clone(), self.y.clone())
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SplitPointSet {
    pub points: Vec<SplitPoint>,
    pub bezout_budget: u64,
}

impl SplitPointSet {
    /// Adds a point or merges provenance into an existing equal point.
    pub fn insert(&mut self, pt: AlgPoint, role: &str) {
        for sp in self.points.iter_mut() {
            if points_equal(&sp.point(), &pt) {
                sp.provenance.insert(role.to_string());
                return;
            }
        }
        self.points.push(SplitPoint { x: pt.0, y: pt.1, provenance: BTreeSet::from([role.to_string()]) });
    }

    pub fn merge(&mut self, other: &SplitPointSet) {
        for sp in &other.points {
            for role in &sp.provenance {
                self.insert(sp.point(), role);
            }
        }
        self.bezout_budget += other.bezout_budget;
        self.sort();
    }

    pub fn sort(&mut self) {
        self.points.sort_by(|a, b| cmp_points(&a.point(), &b.point()));
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, pt: &AlgPoint) -> Option<usize> {
        self.points.iter().position(|sp| points_equal(&sp.point(), pt))
    }
}

/// Zeros on the curve of the strata polynomials inside `region`. For the
/// sigma kind, `P_x` and `P_y` contribute only their common zeros (the
/// singular points of the curve).
/// Split points inside `region`, or in the whole plane for `None`.
pub fn strata_points(curve: &PlaneCurve, polys: &StrataPolys, region: Option<&Rect>) -> Result<SplitPointSet> {
    let p = curve.zpoly();
    let mut set = SplitPointSet { points: Vec::new(), bezout_budget: polys.bezout_budget(curve.degree()) };
    let zeros_of = |z: &ZBiPoly| -> Result<Vec<AlgPoint>> {
        if z.is_zero() || z.total_degree() == Some(0) {
            return Ok(Vec::new());
        }
        common_zeros_z(p, z, region)
    };
    let mut start = 0;
    if polys.kind == StrataKind::Sigma {
        for sp in singular_points(curve, region)? {
            set.insert(sp, "singular");
        }
        start = 2;
    }
    for e in &polys.entries[start..] {
        if e.vanishes_identically {
            continue;
        }
        for pt in zeros_of(&e.z)? {
            set.insert(pt, &e.role);
        }
    }
    set.sort();
    Ok(set)
}

/// Points of the curve where both partial derivatives vanish.
pub fn singular_points(curve: &PlaneCurve, region: Option<&Rect>) -> Result<Vec<AlgPoint>> {
    let p = curve.zpoly();
    let (px, py) = (curve.zpx(), curve.zpy());
    let zx = if px.is_zero() { None } else { Some(common_zeros_z(p, px, region)?) };
    let zy = if py.is_zero() { None } else { Some(common_zeros_z(p, py, region)?) };
    Ok(match (zx, zy) {
        (Some(a), Some(b)) => a.into_iter().filter(|pa| b.iter().any(|pb| points_equal(pa, pb))).collect(),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn curve(s: &str) -> PlaneCurve {
        PlaneCurve::parse(s).unwrap()
    }

    fn p(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn sigma_lists() {
        let s = sigma_polys(&curve("x^2 + y^2 - 1"), 1).unwrap();
        assert_eq!(s.polys(), vec![p("2x"), p("2y"), p("1"), p("2y"), p("-8x^2 - 8y^2")]);
        let s = sigma_polys(&curve("y - x^2"), 1).unwrap();
        assert_eq!(s.polys(), vec![p("-2x"), p("1"), p("1"), p("1"), p("2")]);
    }

    #[test]
    fn sigma_points() {
        let c = curve("x^2 + y^2 - 1");
        let pts = strata_points(&c, &sigma_polys(&c, 1).unwrap(), Some(&Rect::square(-2, 2))).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts.points[0].x.as_rational(), Some(&rat(-1, 1)));
        assert_eq!(pts.points[1].x.as_rational(), Some(&rat(1, 1)));
        let c = curve("y - x^2");
        assert!(strata_points(&c, &sigma_polys(&c, 1).unwrap(), Some(&Rect::square(-5, 5))).unwrap().is_empty());
    }

    #[test]
    fn pi_points_on_quarter_circle() {
        let c = curve("x^2 + y^2 - 1");
        let pts = strata_points(&c, &pi_polys(&c, 1).unwrap(), Some(&Rect::unit())).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts.points[0].x.as_rational(), Some(&rat(0, 1)));
        assert!((pts.points[1].x.approx() - 0.70710678).abs() < 1e-6);
        assert_eq!(pts.points[2].y.as_rational(), Some(&rat(0, 1)));
        assert!(pts.points[1].provenance.contains("P_x-P_y"));
    }

    #[test]
    fn singular_node() {
        // nodal cubic y^2 = x^2 (x + 1)
        let c = curve("y^2 - x^3 - x^2");
        let s = singular_points(&c, Some(&Rect::square(-2, 2))).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].0.as_rational(), Some(&rat(0, 1)));
    }
}
