//! The tangent operator `L = P_y d/dx - P_x d/dy`, its Wronskians, and the
//! numerators of the iterated rescaled operators `L/P_y` and `-L/P_x`.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipoly::{Axis, BiPoly, MonomialBasis};
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::modp::{PolyP, PRIMES};
use crate::zbipoly::ZBiPoly;

#[derive(Clone, Debug)]
pub struct TangentOperator {
    pub curve: PlaneCurve,
    px: ZBiPoly,
    py: ZBiPoly,
}

impl TangentOperator {
    pub fn new(curve: &PlaneCurve) -> Self {
        TangentOperator { curve: curve.clone(), px: curve.zpx().clone(), py: curve.zpy().clone() }
    }

    pub fn px(&self) -> &ZBiPoly {
        &self.px
    }

    pub fn py(&self) -> &ZBiPoly {
        &self.py
    }

    /// `P_y q_x - P_x q_y` on integer polynomials.
    pub fn apply_z(&self, q: &ZBiPoly) -> ZBiPoly {
        &(&self.py * &q.dx()) - &(&self.px * &q.dy())
    }

    pub fn apply(&self, q: &BiPoly) -> BiPoly {
        let (z, s) = q.to_integer();
        BiPoly::from_zbi(&self.apply_z(&z)).scale(&crate::rational::BigRational::new(1.into(), s))
    }
}

pub fn apply_l(op: &TangentOperator, q: &BiPoly) -> BiPoly {
    op.apply(q)
}

#[derive(Clone, Debug, Serialize)]
pub struct WronskianEntry {
    pub j: usize,
    pub degree: Option<u32>,
    pub degree_bound: u32,
    pub poly: BiPoly,
}

#[derive(Clone, Debug)]
pub struct WronskianSequence {
    pub k: usize,
    pub basis: MonomialBasis,
    pub entries: Vec<WronskianEntry>,
    pub z: Vec<ZBiPoly>,
}

impl WronskianSequence {
    pub fn polys(&self) -> Vec<BiPoly> {
        self.entries.iter().map(|e| e.poly.clone()).collect()
    }
}

/// `j(k + jd)`
pub fn wronskian_degree_bound(j: usize, k: usize, d: usize) -> u32 {
    (j * (k + j * d)) as u32
}

/// Degree estimate of the last Wronskian from entry degrees
/// `deg f_m + i(d-2)`; used to decide whether exact computation is affordable.
pub fn wronskian_work_degree(k: usize, d: usize) -> usize {
    let b = MonomialBasis::new(k);
    let mu = b.len();
    let sum: usize = b.entries.iter().map(|&(i, j)| (i + j) as usize).sum();
    sum + d.saturating_sub(2) * mu * (mu - 1) / 2
}

/// Matrix `(L^i f_m)` for `i, m < n`.
pub fn iterate_matrix(op: &TangentOperator, funcs: &[ZBiPoly]) -> Vec<Vec<ZBiPoly>> {
    let n = funcs.len();
    let cols: Vec<Vec<ZBiPoly>> = funcs
        .par_iter()
        .map(|f| {
            let mut col = Vec::with_capacity(n);
            let mut cur = f.clone();
            for _ in 0..n {
                let next = op.apply_z(&cur);
                col.push(std::mem::replace(&mut cur, next));
            }
            col
        })
        .collect();
    (0..n).map(|i| (0..n).map(|m| cols[m][i].clone()).collect()).collect()
}

/// Leading principal minors of `m` by fraction-free elimination without
/// pivoting; a vanishing minor is reported as its 1-based index.
pub fn leading_minors(mut m: Vec<Vec<ZBiPoly>>) -> std::result::Result<Vec<ZBiPoly>, usize> {
    let n = m.len();
    let mut minors = Vec::with_capacity(n);
    let mut prev = ZBiPoly::one();
    for k in 0..n {
        let pivot = m[k][k].clone();
        if pivot.is_zero() {
            return Err(k + 1);
        }
        minors.push(pivot.clone());
        let (head, tail) = m.split_at_mut(k + 1);
        let row_k = &head[k];
        tail.par_iter_mut().for_each(|row| {
            for j in k + 1..n {
                let num = &(&pivot * &row[j]) - &(&row[k] * &row_k[j]);
                row[j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        });
        prev = pivot;
    }
    Ok(minors)
}

/// Whether `w` vanishes identically on the curve, decided by `Res_y(P, w)`.
/// A nonzero value of the resultant modulo a prime at a sample point
/// settles non-vanishing; otherwise the exact resultants are used.
pub fn vanishes_on_curve(curve: &PlaneCurve, w: &ZBiPoly) -> bool {
    if w.is_zero() {
        return true;
    }
    let p = curve.zpoly();
    for &prime in PRIMES.iter().take(4) {
        for x0 in [3u64, 17, 101, 1009] {
            let pa = specialize_modp(p, x0, prime);
            let pb = specialize_modp(w, x0, prime);
            if pa.degree() != p.degree_y() || pb.degree() != w.degree_y() {
                continue;
            }
            if resultant_modp(&pa, &pb) != 0 {
                return false;
            }
        }
    }
    let rx = crate::resultant::res_z(p, w, Axis::Y);
    let ry = crate::resultant::res_z(p, w, Axis::X);
    rx.is_zero() && ry.is_zero()
}

/// `w(x0, y)` modulo `prime`.
pub fn specialize_modp(w: &ZBiPoly, x0: u64, prime: u64) -> PolyP {
    PolyP::new(
        w.rows()
            .iter()
            .map(|r| PolyP::from_zpoly(r, prime).eval(x0 % prime))
            .collect(),
        prime,
    )
}

/// Resultant of two polynomials over `Z/p` with their actual degrees.
pub fn resultant_modp(a: &PolyP, b: &PolyP) -> u64 {
    let p = a.p;
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else { return 0 };
    if n == 0 {
        return crate::modp::pow(b.c[0], m as u64, p);
    }
    if m == 0 {
        return crate::modp::pow(a.c[0], n as u64, p);
    }
    let r = a.rem(b);
    let Some(dr) = r.degree() else { return 0 };
    // Res(a, b) = (-1)^(mn) lc(b)^(m - deg r) Res(b, r)
    let mut v = crate::modp::pow(*b.c.last().unwrap(), (m - dr) as u64, p) * resultant_modp(b, &r) % p;
    if (m * n) % 2 == 1 {
        v = (p - v) % p;
    }
    v
}

/// `W_1, ..., W_mu` for the degree-`k` monomial basis. Requires `k < d`.
pub fn wronskians(op: &TangentOperator, k: usize) -> Result<WronskianSequence> {
    let d = op.curve.degree() as usize;
    if k >= d {
        return Err(Error::Precondition(format!("Wronskians need k < d (k = {k}, d = {d})")));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let basis = MonomialBasis::new(k);
    let funcs: Vec<ZBiPoly> = (0..basis.len()).map(|m| basis.zpoly(m)).collect();
    let minors = leading_minors(iterate_matrix(op, &funcs)).map_err(Error::LinearDependenceOnCurve)?;
    let mut entries = Vec::with_capacity(minors.len());
    for (idx, w) in minors.iter().enumerate() {
        let j = idx + 1;
        if vanishes_on_curve(&op.curve, w) {
            return Err(Error::LinearDependenceOnCurve(j));
        }
        let poly = BiPoly::from_zbi(w);
        entries.push(WronskianEntry {
            j,
            degree: poly.total_degree(),
            degree_bound: wronskian_degree_bound(j, k, d),
            poly,
        });
    }
    Ok(WronskianSequence { k, basis, entries, z: minors })
}

#[derive(Clone, Debug, Serialize)]
pub struct RescaledDerivatives {
    pub axis: Axis,
    pub source: BiPoly,
    pub numerators: Vec<BiPoly>,
    #[serde(skip)]
    pub z: Vec<ZBiPoly>,
    /// `deg Q + 2dj` for each `j`.
    pub degree_bounds: Vec<u32>,
}

/// Numerators `Q_{axis,j}` with `L_axis^j Q = Q_{axis,j} / P_axis'^(2j-1)`,
/// where `P_axis'` is `P_y` for `Axis::X` and `P_x` for `Axis::Y`.
pub fn rescaled_numerators(op: &TangentOperator, q: &BiPoly, axis: Axis, r: usize) -> Result<RescaledDerivatives> {
    let (zq, scale) = q.to_integer();
    let nums = rescaled_numerators_z(op, &zq, axis, r)?;
    let inv = crate::rational::BigRational::new(1.into(), scale);
    let d = op.curve.degree();
    let dq = q.total_degree().unwrap_or(0);
    Ok(RescaledDerivatives {
        axis,
        source: q.clone(),
        numerators: nums.iter().map(|z| BiPoly::from_zbi(z).scale(&inv)).collect(),
        degree_bounds: (0..=r as u32).map(|j| dq + 2 * d * j).collect(),
        z: nums,
    })
}

pub fn rescaled_numerators_z(op: &TangentOperator, q: &ZBiPoly, axis: Axis, r: usize) -> Result<Vec<ZBiPoly>> {
    // For Axis::Y swap the roles of x and y throughout.
    let (a, b) = match axis {
        Axis::X => (op.py.clone(), op.px.clone()),
        Axis::Y => (op.px.clone(), op.py.clone()),
    };
    if a.is_zero() {
        return Err(Error::DegenerateAxis(format!("{:?}", axis).to_lowercase()));
    }
    let (dmain, dother): (fn(&ZBiPoly) -> ZBiPoly, fn(&ZBiPoly) -> ZBiPoly) = match axis {
        Axis::X => (ZBiPoly::dx, ZBiPoly::dy),
        Axis::Y => (ZBiPoly::dy, ZBiPoly::dx),
    };
    let mut out = vec![q.clone()];
    if r == 0 {
        return Ok(out);
    }
    out.push(&(&a * &dmain(q)) - &(&b * &dother(q)));
    let a2 = &a * &a;
    let ab = &a * &b;
    // a (a)_main - b (a)_other
    let corr = &(&a * &dmain(&a)) - &(&b * &dother(&a));
    for j in 1..r {
        let f = &out[j];
        let t1 = &a2 * &dmain(f);
        let t2 = &ab * &dother(f);
        let t3 = (f * &corr).scale(&BigInt::from(2 * j as i64 - 1));
        out.push(&(&t1 - &t2) - &t3);
    }
    Ok(out)
}
