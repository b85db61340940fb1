//! Cutting `Γ ∩ [0,1]^2` into monotone arcs at the split points.
//!
//! The x-coordinates of all split points (plus 0 and 1) cut `[0,1]` into
//! open strips. Over a strip the curve is a disjoint union of graphs, one
//! per real root of `P(x0, ·)` in `(0,1)`; a cell is one such graph. At each
//! cut abscissa a junction certificate decides which cells end at which
//! split point and which cells continue through a regular point of the
//! fibre. Arcs are maximal chains of continuing cells.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebraic::AlgebraicReal;
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::interval::{eval_bivariate, RatInterval};
use crate::rational::{rat, simplest_between};
use crate::roots::{count_roots_closed, isolate_zpoly, Range};
use crate::solve::{common_zeros_z, AlgPoint, Rect};
use crate::strata::{pi_polys, sigma_polys, strata_points, SplitPointSet, StrataKind, StrataPolys};
use crate::zbipoly::ZBiPoly;

const MAX_ROUNDS: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Direction {
    #[serde(rename = "x-monotone")]
    XMonotone,
    #[serde(rename = "y-monotone")]
    YMonotone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cell {
    pub strip: usize,
    pub branch: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Arc {
    pub direction: Direction,
    /// Abscissae of the two endpoints.
    pub x_lo: AlgebraicReal,
    pub x_hi: AlgebraicReal,
    /// Branch index in the first cell.
    pub branch: usize,
    pub cells: Vec<Cell>,
    /// Indices into the split point list.
    pub start: usize,
    pub end: usize,
    pub signs: BTreeMap<String, i32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Strip {
    pub lo: AlgebraicReal,
    pub hi: AlgebraicReal,
    #[serde(with = "crate::rational::serde_rational")]
    pub sample: BigRational,
    pub branches: usize,
}

#[derive(Clone, Debug)]
struct Band {
    split: usize,
    left: std::ops::Range<usize>,
    right: std::ops::Range<usize>,
}

/// Certified local picture of the curve near the vertical line `x = xs[index]`.
#[derive(Clone, Debug)]
struct Junction {
    bands: Vec<Band>,
    /// Regular fibre points, bottom to top: (rank in left strip, rank in right strip).
    passes: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArcDecomposition {
    pub curve: PlaneCurve,
    pub k: usize,
    pub r: usize,
    pub arcs: Vec<Arc>,
    pub split_points: SplitPointSet,
    pub component_count: usize,
    pub sigma_points: usize,
    pub pi_points: usize,
    pub sigma_budget: u64,
    pub pi_budget: u64,
    pub strips: Vec<Strip>,
    #[serde(skip)]
    xs: Vec<AlgebraicReal>,
    #[serde(skip)]
    junctions: Vec<Junction>,
    #[serde(skip)]
    cell_arc: HashMap<Cell, usize>,
}

/// Where a point of the curve inside the box sits in a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Split(usize),
    OnArc(usize),
}

fn rect_iv(lo: &BigRational, hi: &BigRational) -> RatInterval {
    RatInterval::new(lo.clone(), hi.clone())
}

fn nth_y_derivative(p: &ZBiPoly, m: usize) -> ZBiPoly {
    let mut d = p.clone();
    for _ in 0..m {
        d = d.dy();
    }
    d
}

/// Refines both numbers until their enclosures are disjoint. They must differ.
fn separate(a: &mut AlgebraicReal, b: &mut AlgebraicReal) {
    while a.interval().hi >= b.interval().lo {
        let wa = a.interval().width();
        let wb = b.interval().width();
        if wa >= wb {
            a.bisect();
        } else {
            b.bisect();
        }
    }
}

/// Ranks of the roots of `f` in `(0,1)` that fall below each cut value.
/// Cut values must not be roots of `f`.
fn cumulative_counts(f: &ZPoly, cuts: &[BigRational]) -> Vec<usize> {
    cuts.iter()
        .map(|c| if c.is_zero() { 0 } else { count_roots_closed(f, &BigRational::zero(), c) })
        .collect()
}

use crate::zpoly::ZPoly;

struct JunctionInput<'a> {
    p: &'a ZBiPoly,
    left_lim: Option<BigRational>,
    right_lim: Option<BigRational>,
    /// (split index, y, multiplicity of y as a root of `P(xi, ·)`), sorted by y.
    splits: Vec<(usize, AlgebraicReal, usize)>,
    expect_left: usize,
    expect_right: usize,
}

fn certify_junction(xi: &mut AlgebraicReal, input: &mut JunctionInput) -> Result<Junction> {
    let derivs: Vec<ZBiPoly> = input.splits.iter().map(|s| nth_y_derivative(input.p, s.2)).collect();
    let mut w = rat(1, 4);
    if let Some(l) = &input.left_lim {
        w = w.min((&xi.interval().lo - l) / BigRational::from_integer(2.into()));
    }
    if let Some(r) = &input.right_lim {
        w = w.min((r - &xi.interval().hi) / BigRational::from_integer(2.into()));
    }
    // A fibre root of multiplicity m pulls the curve only (y - b)^m away
    // from the vertical line, so the strip must shrink like h^(m+1).
    let m_max = input.splits.iter().map(|s| s.2).max().unwrap_or(1);
    let w_factor = BigRational::from_integer(BigInt::one() << (m_max + 1).max(4));
    let mut h = rat(1, 8);
    for _ in 0..MAX_ROUNDS {
        if let Some(j) = try_junction(xi, input, &derivs, &w, &h)? {
            return Ok(j);
        }
        h /= BigRational::from_integer(2.into());
        w /= &w_factor;
    }
    Err(Error::CertificationFailure(format!("junction at x ~ {:.6} could not be certified", xi.approx())))
}

fn try_junction(
    xi: &mut AlgebraicReal,
    input: &mut JunctionInput,
    derivs: &[ZBiPoly],
    w: &BigRational,
    h: &BigRational,
) -> Result<Option<Junction>> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    xi.refine_in_place(&(w / BigRational::from_integer(4.into())));
    let lo_x = if input.left_lim.is_some() { &xi.interval().lo - w } else { xi.interval().lo.clone() };
    let hi_x = if input.right_lim.is_some() { &xi.interval().hi + w } else { xi.interval().hi.clone() };

    // Bands around each split ordinate; the outer edge of a band at y = 0
    // or y = 1 is the box edge itself.
    let mut bands: Vec<(BigRational, BigRational)> = Vec::new();
    let mut interior_edges: Vec<BigRational> = Vec::new();
    for (_, y, _) in input.splits.iter_mut() {
        y.refine_in_place(&(h / BigRational::from_integer(4.into())));
        let lo = if y.cmp_rational(&zero) == Ordering::Equal { zero.clone() } else { &y.interval().lo - h };
        let hi = if y.cmp_rational(&one) == Ordering::Equal { one.clone() } else { &y.interval().hi + h };
        if lo < zero || hi > one || (lo.is_zero() && !y.cmp_rational(&zero).is_eq()) || (hi == one && !y.cmp_rational(&one).is_eq()) {
            return Ok(None);
        }
        if let Some(prev) = bands.last() {
            if prev.1 >= lo {
                return Ok(None);
            }
        }
        if !lo.is_zero() {
            interior_edges.push(lo.clone());
        }
        if hi != one {
            interior_edges.push(hi.clone());
        }
        bands.push((lo, hi));
    }
    for c in &interior_edges {
        let line = input.p.specialize_y(c);
        if line.is_zero() || count_roots_closed(&line, &lo_x, &hi_x) > 0 {
            return Ok(None);
        }
    }
    let xs = rect_iv(&lo_x, &hi_x);
    for (d, band) in derivs.iter().zip(&bands) {
        if eval_bivariate(d.rows(), &xs, &rect_iv(&band.0, &band.1)).sign().is_none() {
            return Ok(None);
        }
    }

    let mut cuts = Vec::new();
    for b in &bands {
        cuts.push(b.0.clone());
        cuts.push(b.1.clone());
    }
    let side = |x: &BigRational, expect: usize| -> Result<(Vec<usize>, usize)> {
        let f = input.p.specialize_x(x);
        let total = isolate_zpoly(&f, &Range::open(zero.clone(), one.clone())).len();
        if total != expect {
            return Err(Error::CertificationFailure(format!("branch count changed inside a strip near x ~ {x}")));
        }
        let mut cum = cumulative_counts(&f, &cuts);
        // A band ending at the top edge owns everything above its lower edge.
        if bands.last().is_some_and(|b| b.1 == one) {
            *cum.last_mut().expect("nonempty") = total;
        }
        Ok((cum, total))
    };
    let left = match input.left_lim {
        Some(_) => Some(side(&lo_x, input.expect_left)?),
        None => None,
    };
    let right = match input.right_lim {
        Some(_) => Some(side(&hi_x, input.expect_right)?),
        None => None,
    };
    let gaps = |s: &(Vec<usize>, usize)| -> Vec<std::ops::Range<usize>> {
        let (cum, total) = s;
        let mut out = Vec::new();
        let mut prev = 0;
        for i in 0..bands.len() {
            out.push(prev..cum[2 * i]);
            prev = cum[2 * i + 1];
        }
        out.push(prev..*total);
        out
    };
    let band_ranges = |s: &Option<(Vec<usize>, usize)>, i: usize| match s {
        Some((cum, _)) => cum[2 * i]..cum[2 * i + 1],
        None => 0..0,
    };
    let out_bands = (0..bands.len())
        .map(|i| Band { split: input.splits[i].0, left: band_ranges(&left, i), right: band_ranges(&right, i) })
        .collect();
    let mut passes = Vec::new();
    match (&left, &right) {
        (Some(l), Some(r)) => {
            for (gl, gr) in gaps(l).into_iter().zip(gaps(r)) {
                if gl.len() != gr.len() {
                    return Err(Error::CertificationFailure("unbalanced regular fibre points".into()));
                }
                passes.extend(gl.zip(gr));
            }
        }
        (Some(s), None) | (None, Some(s)) => {
            if gaps(s).iter().any(|g| !g.is_empty()) {
                return Err(Error::CertificationFailure("branch reaches the box edge off the split points".into()));
            }
        }
        (None, None) => {}
    }
    Ok(Some(Junction { bands: out_bands, passes }))
}

/// Multiplicity of `y` as a root of `P(x, ·)` at a point of the curve.
fn fibre_multiplicity(curve: &PlaneCurve, pt: &AlgPoint, vertical_hint: bool) -> Result<usize> {
    if !vertical_hint {
        return Ok(1);
    }
    let p = curve.zpoly();
    let dy_max = p.degree_y().unwrap_or(0);
    let tiny = Rect::new(
        pt.0.interval().lo.clone(),
        pt.0.interval().hi.clone(),
        pt.1.interval().lo.clone(),
        pt.1.interval().hi.clone(),
    );
    let mut m = 2;
    let mut d = nth_y_derivative(p, 2);
    while m < dy_max && !d.is_zero() && d.total_degree() != Some(0) {
        let zs = common_zeros_z(p, &d, Some(&tiny))?;
        if !zs.iter().any(|z| crate::solve::points_equal(z, pt)) {
            break;
        }
        m += 1;
        d = d.dy();
    }
    Ok(m)
}

fn box_edge_polys(curve: &PlaneCurve) -> StrataPolys {
    let lin = |s: &str| crate::bipoly::BiPoly::parse(s).expect("literal");
    let entries = ["x", "y"]
        .iter()
        .map(|s| crate::strata::StrataEntry {
            role: format!("box:{s}"),
            poly: lin(s),
            z: lin(s).to_integer().0,
            vanishes_identically: false,
        })
        .collect();
    let _ = curve;
    StrataPolys { kind: StrataKind::Pi, parameter: 0, entries }
}

/// Decomposes `Γ ∩ [0,1]^2` at the zeros of the sigma and pi strata.
pub fn decompose_arcs(curve: &PlaneCurve, k: usize, r: usize) -> Result<ArcDecomposition> {
    let unit = Rect::unit();
    let sigma = sigma_polys(curve, k)?;
    let pi = pi_polys(curve, r)?;
    let sigma_set = strata_points(curve, &sigma, Some(&unit))?;
    let pi_set = strata_points(curve, &pi, Some(&unit))?;
    let mut split = SplitPointSet::default();
    split.merge(&sigma_set);
    split.merge(&pi_set);
    let mut edges = strata_points(curve, &box_edge_polys(curve), Some(&unit))?;
    edges.bezout_budget = 0;
    split.merge(&edges);
    decompose_with_splits(curve, k, r, split, &sigma_set, &pi_set, &pi)
}

/// Decomposition cut only at the given split points (plus the box edges).
/// The caller is responsible for the split set containing every zero of
/// `P_x`, `P_y` and `P_x ± P_y` on the curve inside the box.
pub fn decompose_with_splits(
    curve: &PlaneCurve,
    k: usize,
    r: usize,
    mut split: SplitPointSet,
    sigma_set: &SplitPointSet,
    pi_set: &SplitPointSet,
    pi: &StrataPolys,
) -> Result<ArcDecomposition> {
    let p = curve.zpoly();
    let zero = BigRational::zero();
    let one = BigRational::one();
    split.sort();

    // Cut abscissae.
    let mut xs: Vec<AlgebraicReal> = vec![AlgebraicReal::from_rational(zero.clone()), AlgebraicReal::from_rational(one.clone())];
    for sp in &split.points {
        xs.push(sp.x.clone());
    }
    xs.sort_by(|a, b| a.cmp_exact(b));
    xs.dedup_by(|a, b| a.cmp_exact(b) == Ordering::Equal);
    for i in 0..xs.len() - 1 {
        let (l, r) = xs.split_at_mut(i + 1);
        separate(&mut l[i], &mut r[0]);
    }

    let mut strips = Vec::new();
    for i in 0..xs.len() - 1 {
        let sample = simplest_between(&xs[i].interval().hi, &xs[i + 1].interval().lo);
        let sample = if xs[i].cmp_rational(&sample).is_eq() || xs[i + 1].cmp_rational(&sample).is_eq() {
            crate::rational::midpoint(&xs[i].interval().hi, &xs[i + 1].interval().lo)
        } else {
            sample
        };
        let f = p.specialize_x(&sample);
        if f.is_zero() {
            return Err(Error::CertificationFailure("curve contains a vertical line".into()));
        }
        let branches = isolate_zpoly(&f, &Range::open(zero.clone(), one.clone())).len();
        strips.push(Strip { lo: xs[i].clone(), hi: xs[i + 1].clone(), sample, branches });
    }

    // Junctions.
    let mut junctions = Vec::with_capacity(xs.len());
    let mut split_at: Vec<Vec<usize>> = vec![Vec::new(); xs.len()];
    for (s, sp) in split.points.iter().enumerate() {
        let i = xs.iter().position(|x| x.cmp_exact(&sp.x).is_eq()).expect("cut abscissa");
        split_at[i].push(s);
    }
    for i in 0..xs.len() {
        let mut splits = Vec::new();
        for &s in &split_at[i] {
            let sp = &split.points[s];
            let hint = sp.provenance.iter().any(|r| r == "P_y" || r == "singular");
            let m = fibre_multiplicity(curve, &sp.point(), hint)?;
            splits.push((s, sp.y.clone(), m));
        }
        let mut input = JunctionInput {
            p,
            left_lim: (i > 0).then(|| xs[i - 1].interval().hi.clone()),
            right_lim: (i + 1 < xs.len()).then(|| xs[i + 1].interval().lo.clone()),
            splits,
            expect_left: if i > 0 { strips[i - 1].branches } else { 0 },
            expect_right: if i + 1 < xs.len() { strips[i].branches } else { 0 },
        };
        let mut xi = xs[i].clone();
        junctions.push(certify_junction(&mut xi, &mut input)?);
    }

    // Chain cells into arcs.
    let mut next: HashMap<Cell, Cell> = HashMap::new();
    let mut has_prev: HashMap<Cell, ()> = HashMap::new();
    let mut left_end: HashMap<Cell, usize> = HashMap::new();
    let mut right_end: HashMap<Cell, usize> = HashMap::new();
    for (i, j) in junctions.iter().enumerate() {
        for &(l, r) in &j.passes {
            let a = Cell { strip: i - 1, branch: l };
            let b = Cell { strip: i, branch: r };
            next.insert(a, b);
            has_prev.insert(b, ());
        }
        for band in &j.bands {
            for l in band.left.clone() {
                right_end.insert(Cell { strip: i - 1, branch: l }, band.split);
            }
            for r in band.right.clone() {
                left_end.insert(Cell { strip: i, branch: r }, band.split);
            }
        }
    }
    let mut arcs = Vec::new();
    let mut cell_arc = HashMap::new();
    for (si, strip) in strips.iter().enumerate() {
        for b in 0..strip.branches {
            let first = Cell { strip: si, branch: b };
            if has_prev.contains_key(&first) {
                continue;
            }
            let mut cells = vec![first];
            let mut cur = first;
            while let Some(&n) = next.get(&cur) {
                cells.push(n);
                cur = n;
            }
            let start = *left_end.get(&first).ok_or_else(|| Error::CertificationFailure("arc without a left endpoint".into()))?;
            let end = *right_end.get(&cur).ok_or_else(|| Error::CertificationFailure("arc without a right endpoint".into()))?;
            let signs = arc_signs(curve, pi, &strips, &cells)?;
            let direction = if signs.get("P_x+P_y").copied().unwrap_or(0) * signs.get("P_x-P_y").copied().unwrap_or(0) < 0 { Direction::XMonotone } else { Direction::YMonotone };
            arcs.push(Arc {
                direction,
                x_lo: strips[first.strip].lo.clone(),
                x_hi: strips[cur.strip].hi.clone(),
                branch: first.branch,
                cells,
                start,
                end,
                signs,
            });
        }
    }
    arcs.sort_by(|a, b| a.direction.cmp(&b.direction).then_with(|| a.x_lo.cmp_exact(&b.x_lo)).then(a.cells[0].strip.cmp(&b.cells[0].strip)).then(a.branch.cmp(&b.branch)));
    for (id, arc) in arcs.iter().enumerate() {
        for c in &arc.cells {
            cell_arc.insert(*c, id);
        }
    }

    let component_count = count_components(split.len(), &arcs);
    Ok(ArcDecomposition {
        curve: curve.clone(),
        k,
        r,
        arcs,
        sigma_points: sigma_set.len(),
        pi_points: pi_set.len(),
        sigma_budget: sigma_set.bezout_budget,
        pi_budget: pi_set.bezout_budget,
        split_points: split,
        component_count,
        strips,
        xs,
        junctions,
        cell_arc,
    })
}

fn count_components(n_split: usize, arcs: &[Arc]) -> usize {
    let n = n_split + arcs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (a, arc) in arcs.iter().enumerate() {
        for s in [arc.start, arc.end] {
            let (ra, rs) = (find(&mut parent, n_split + a), find(&mut parent, s));
            parent[ra] = rs;
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// Signs of the derivative-control polynomials at the sample point of each
/// cell; they must agree across the cells of an arc.
fn arc_signs(curve: &PlaneCurve, pi: &StrataPolys, strips: &[Strip], cells: &[Cell]) -> Result<BTreeMap<String, i32>> {
    let p = curve.zpoly();
    let mut signs: BTreeMap<String, i32> = BTreeMap::new();
    for c in cells {
        let x0 = &strips[c.strip].sample;
        let f = p.specialize_x(x0);
        let roots = isolate_zpoly(&f, &Range::open(BigRational::zero(), BigRational::one()));
        let y = AlgebraicReal::new(&f, roots[c.branch].clone());
        for e in &pi.entries {
            let signed = matches!(e.role.as_str(), "P_x" | "P_y" | "P_x+P_y" | "P_x-P_y")
                || e.role.starts_with("y_x")
                || e.role.starts_with("x_y");
            if !signed || e.vanishes_identically {
                continue;
            }
            let s = y.sign_of_zpoly(&e.z.specialize_x(x0));
            if s == 0 {
                return Err(Error::CertificationFailure(format!("{} vanishes inside an arc", e.role)));
            }
            if let Some(&prev) = signs.get(&e.role) {
                if prev != s {
                    return Err(Error::CertificationFailure(format!("{} changes sign along an arc", e.role)));
                }
            }
            signs.insert(e.role.clone(), s);
        }
    }
    Ok(signs)
}

impl ArcDecomposition {
    pub fn harnack_check(&self) -> bool {
        harnack_check(self)
    }

    /// A closed rectangle containing the arc.
    pub fn arc_rect(&self, id: usize) -> Rect {
        let a = &self.arcs[id];
        Rect::new(a.x_lo.interval().lo.clone(), a.x_hi.interval().hi.clone(), BigRational::zero(), BigRational::one())
    }

    fn cell_location(&self, c: Cell) -> Result<Location> {
        self.cell_arc
            .get(&c)
            .map(|&a| Location::OnArc(a))
            .ok_or_else(|| Error::CertificationFailure(format!("cell {c:?} belongs to no arc")))
    }

    /// Locates a rational point; `None` when it is off the curve or outside the box.
    pub fn locate_rational(&self, x: &BigRational, y: &BigRational) -> Result<Option<Location>> {
        let p = self.curve.zpoly();
        if !Rect::unit().contains_rational(x, y) || !p.eval(x, y).is_zero() {
            return Ok(None);
        }
        if let Some(i) = self
            .split_points
            .points
            .iter()
            .position(|sp| sp.x.cmp_rational(x).is_eq() && sp.y.cmp_rational(y).is_eq())
        {
            return Ok(Some(Location::Split(i)));
        }
        let f = p.specialize_x(x);
        let below = count_roots_closed(&f, &BigRational::zero(), y) - 1;
        for i in 0..self.xs.len() {
            match self.xs[i].cmp_rational(x) {
                Ordering::Equal => {
                    let splits_below = self
                        .split_points
                        .points
                        .iter()
                        .filter(|sp| sp.x.cmp_rational(x).is_eq() && sp.y.cmp_rational(y).is_lt())
                        .count();
                    let (l, r) = *self.junctions[i]
                        .passes
                        .get(below - splits_below)
                        .ok_or_else(|| Error::CertificationFailure("fibre point missing from junction".into()))?;
                    let cell = if i > 0 { Cell { strip: i - 1, branch: l } } else { Cell { strip: i, branch: r } };
                    return self.cell_location(cell).map(Some);
                }
                Ordering::Greater => {
                    return self.cell_location(Cell { strip: i - 1, branch: below }).map(Some);
                }
                Ordering::Less => {}
            }
        }
        unreachable!("x lies in [0, 1]")
    }

    /// Locates an algebraic point of the curve; `None` when outside the box.
    pub fn locate(&self, pt: &AlgPoint) -> Result<Option<Location>> {
        if !Rect::unit().contains(pt) {
            return Ok(None);
        }
        if let (Some(x), Some(y)) = (pt.0.as_rational(), pt.1.as_rational()) {
            return self.locate_rational(x, y);
        }
        if let Some(i) = self.split_points.index_of(pt) {
            return Ok(Some(Location::Split(i)));
        }
        let mut alpha = pt.0.clone();
        let mut beta = pt.1.clone();
        // The strip to the left of alpha (alpha may itself be a cut abscissa).
        let strip = self
            .xs
            .iter()
            .rposition(|x| x.cmp_exact(&alpha).is_lt())
            .ok_or_else(|| Error::CertificationFailure("point left of the box".into()))?;
        let mut left = self.xs[strip].clone();
        separate(&mut left, &mut alpha);
        let p = self.curve.zpoly();
        let py = self.curve.zpy();
        let two = BigRational::from_integer(BigInt::from(2));
        let mut w = (&alpha.interval().lo - &left.interval().hi) / &two;
        let mut h = rat(1, 8);
        for _ in 0..MAX_ROUNDS {
            alpha.refine_in_place(&(&w / BigRational::from_integer(4.into())));
            beta.refine_in_place(&(&h / BigRational::from_integer(4.into())));
            let u = &alpha.interval().lo - &w;
            let hi_x = alpha.interval().hi.clone();
            let band = (&beta.interval().lo - &h, &beta.interval().hi + &h);
            let ok = band.0.is_positive()
                && band.1 < BigRational::one()
                && eval_bivariate(py.rows(), &rect_iv(&u, &hi_x), &rect_iv(&band.0, &band.1)).sign().is_some()
                && [&band.0, &band.1].iter().all(|c| {
                    let line = p.specialize_y(c);
                    !line.is_zero() && count_roots_closed(&line, &u, &hi_x) == 0
                });
            if ok {
                let f = p.specialize_x(&u);
                let rank = count_roots_closed(&f, &BigRational::zero(), &band.0);
                if count_roots_closed(&f, &band.0, &band.1) != 1 {
                    return Err(Error::CertificationFailure("thin box does not isolate the branch".into()));
                }
                return self.cell_location(Cell { strip, branch: rank }).map(Some);
            }
            h /= &two;
            w /= BigRational::from_integer(16.into());
        }
        Err(Error::CertificationFailure(format!("could not locate point near ({:.6}, {:.6})", pt.0.approx(), pt.1.approx())))
    }
}

/// Harnack: a real plane curve of degree `d` has at most `d^2` components here.
pub fn harnack_check(dec: &ArcDecomposition) -> bool {
    let d = dec.curve.degree() as usize;
    dec.component_count <= d * d
}

use num_traits::Signed;

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(s: &str) -> PlaneCurve {
        PlaneCurve::parse(s).unwrap()
    }

    #[test]
    fn quarter_circle() {
        let dec = decompose_arcs(&curve("x^2 + y^2 - 1"), 1, 1).unwrap();
        assert_eq!(dec.split_points.len(), 3);
        assert_eq!(dec.arcs.len(), 2);
        assert_eq!(dec.component_count, 1);
        assert!(dec.harnack_check());
        let a = &dec.arcs[0];
        assert_eq!(a.x_lo.as_rational(), Some(&rat(0, 1)));
        assert!((a.x_hi.approx() - 0.7071067811865476).abs() < 1e-9);
        assert_eq!(a.direction, Direction::XMonotone);
        assert_eq!(dec.arcs[1].direction, Direction::YMonotone);
        // (3/5, 4/5) on the upper arc, (4/5, 3/5) on the lower one
        assert_eq!(dec.locate_rational(&rat(3, 5), &rat(4, 5)).unwrap(), Some(Location::OnArc(0)));
        assert_eq!(dec.locate_rational(&rat(4, 5), &rat(3, 5)).unwrap(), Some(Location::OnArc(1)));
        assert_eq!(dec.locate_rational(&rat(0, 1), &rat(1, 1)).unwrap(), Some(Location::Split(0)));
        assert_eq!(dec.locate_rational(&rat(1, 2), &rat(1, 2)).unwrap(), None);
        let s3 = ZPoly::from_i64(&[-3, 0, 4]);
        let y = AlgebraicReal::new(&s3, crate::roots::IsolatingInterval::new(rat(1, 2), rat(1, 1)));
        let pt = (AlgebraicReal::from_rational(rat(1, 2)), y.clone());
        assert_eq!(dec.locate(&pt).unwrap(), Some(Location::OnArc(0)));
        assert_eq!(dec.locate(&(y, AlgebraicReal::from_rational(rat(1, 2)))).unwrap(), Some(Location::OnArc(1)));
    }

    #[test]
    fn parabola_splits_at_unit_slope() {
        let dec = decompose_arcs(&curve("y - x^2"), 1, 2).unwrap();
        // (0,0), (1/2,1/4) where the slope is 1, (1,1)
        assert_eq!(dec.split_points.len(), 3);
        assert_eq!(dec.arcs.len(), 2);
        assert_eq!(dec.arcs[0].direction, Direction::XMonotone);
        assert_eq!(dec.arcs[1].direction, Direction::YMonotone);
        assert_eq!(dec.component_count, 1);
    }

    #[test]
    fn two_branches_through_a_strip() {
        // ellipse inside the box: vertical tangents at x = 1/2 +- 3/8
        let dec = decompose_arcs(&curve("64(x - 1/2)^2 + 144(y - 1/2)^2 - 9"), 1, 1).unwrap();
        assert_eq!(dec.component_count, 1);
        assert!(dec.arcs.len() >= 4);
        let pt = (AlgebraicReal::from_rational(rat(29, 40)), AlgebraicReal::from_rational(rat(7, 10)));
        assert!(matches!(dec.locate(&pt).unwrap(), Some(Location::OnArc(_))));
    }

    #[test]
    fn cubic_with_an_oval() {
        let dec = decompose_arcs(&curve("(y - 1/2)^2 - (x - 1/10)(x - 2/5)(x - 9/10)"), 1, 1).unwrap();
        assert_eq!(dec.component_count, 2);
        assert!(dec.harnack_check());
        for (x, y) in [(rat(1, 4), rat(1, 2)), (rat(1, 1), rat(1, 2))] {
            assert!(dec.locate_rational(&x, &y).unwrap().is_none());
        }
    }
}
