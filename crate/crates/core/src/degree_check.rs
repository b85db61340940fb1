//! Degrees of the Wronskians `W_j` and rescaled numerators `Q_{axis,j}`
//! through arithmetic modulo a large prime, for sizes where the exact
//! integer computation is out of reach.
//!
//! Each polynomial is restricted to a random line `t -> (a + b t, c + e t)`
//! and its restriction is recovered by interpolation from enough values.
//! The recovered degree never exceeds the true degree; it falls short only
//! when the top homogeneous part vanishes in the line direction modulo the
//! prime (probability at most `deg / p` per line). The maximum over two
//! independent lines is reported.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bipoly::{Axis, MonomialBasis};
use crate::curve::PlaneCurve;
use crate::differential::wronskian_degree_bound;
use crate::error::{Error, Result};
use crate::modp;
use crate::zbipoly::ZBiPoly;

const PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

/// Dense bivariate polynomial mod `p`, `c[i][j]` the coefficient of `x^i y^j`.
#[derive(Clone, Debug)]
struct ModBi {
    p: u64,
    c: Vec<Vec<u64>>,
}

impl ModBi {
    fn zero(p: u64) -> Self {
        ModBi { p, c: Vec::new() }
    }

    fn from_z(z: &ZBiPoly, p: u64) -> Self {
        let mut out = ModBi::zero(p);
        for ((i, j), v) in z.terms() {
            out.add_term(i, j, modp::reduce(v, p));
        }
        out
    }

    fn add_term(&mut self, i: usize, j: usize, v: u64) {
        if v == 0 {
            return;
        }
        if self.c.len() <= i {
            self.c.resize(i + 1, Vec::new());
        }
        let row = &mut self.c[i];
        if row.len() <= j {
            row.resize(j + 1, 0);
        }
        row[j] = (row[j] + v) % self.p;
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.c.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().filter(|(_, v)| **v != 0).map(move |(j, &v)| (i, j, v))
        })
    }

    fn mul(&self, o: &ModBi) -> ModBi {
        let p = self.p;
        if self.c.is_empty() || o.c.is_empty() {
            return ModBi::zero(p);
        }
        let wa = self.c.iter().map(Vec::len).max().unwrap_or(0);
        let wb = o.c.iter().map(Vec::len).max().unwrap_or(0);
        let mut c = vec![vec![0u64; wa + wb]; self.c.len() + o.c.len() - 1];
        for (i, ra) in self.c.iter().enumerate() {
            for (k, rb) in o.c.iter().enumerate() {
                let out = &mut c[i + k];
                for (j, &u) in ra.iter().enumerate() {
                    if u == 0 {
                        continue;
                    }
                    for (l, &v) in rb.iter().enumerate() {
                        out[j + l] = (out[j + l] + u * v) % p;
                    }
                }
            }
        }
        ModBi { p, c }
    }

    fn lin(&self, s: u64, o: &ModBi, t: u64) -> ModBi {
        // s*self + t*o
        let p = self.p;
        let mut out = ModBi::zero(p);
        for (i, j, v) in self.terms() {
            out.add_term(i, j, v * s % p);
        }
        for (i, j, v) in o.terms() {
            out.add_term(i, j, v * t % p);
        }
        out
    }

    fn sub(&self, o: &ModBi) -> ModBi {
        self.lin(1, o, self.p - 1)
    }

    fn deriv(&self, axis: Axis) -> ModBi {
        let p = self.p;
        let mut out = ModBi::zero(p);
        for (i, j, v) in self.terms() {
            match axis {
                Axis::X if i > 0 => out.add_term(i - 1, j, v * (i as u64 % p) % p),
                Axis::Y if j > 0 => out.add_term(i, j - 1, v * (j as u64 % p) % p),
                _ => {}
            }
        }
        out
    }

    /// Coefficients in `t` of `self(x0 + bx t, y0 + by t)`, by nested Horner.
    fn restrict(&self, line: &Line) -> Vec<u64> {
        let p = self.p;
        // acc <- acc * (a + b t) + c
        let step = |acc: &mut Vec<u64>, a: u64, b: u64, c: &[u64]| {
            let mut next = vec![0u64; acc.len().max(c.len().saturating_sub(1)) + 1];
            for (e, &v) in acc.iter().enumerate() {
                next[e] = (next[e] + v * a) % p;
                next[e + 1] = (next[e + 1] + v * b) % p;
            }
            for (e, &v) in c.iter().enumerate() {
                next[e] = (next[e] + v) % p;
            }
            *acc = next;
        };
        let mut acc: Vec<u64> = Vec::new();
        for row in self.c.iter().rev() {
            let mut h: Vec<u64> = Vec::new();
            for &v in row.iter().rev() {
                step(&mut h, line.y0, line.by, &[v]);
            }
            step(&mut acc, line.x0, line.bx, &h);
        }
        while acc.len() > 1 && *acc.last().unwrap() == 0 {
            acc.pop();
        }
        acc
    }
}

#[derive(Clone, Copy, Debug)]
struct Line {
    x0: u64,
    y0: u64,
    bx: u64,
    by: u64,
}

fn eval_uni(c: &[u64], t: u64, p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &v| (acc * t + v) % p)
}

fn degree_of(c: &[u64]) -> Option<usize> {
    c.iter().rposition(|&v| v != 0)
}

/// Degree of the polynomial interpolating `values` at nodes `0, 1, 2, ...`.
fn interpolated_degree(values: &[u64], p: u64) -> Option<usize> {
    let mut dd = values.to_vec();
    let n = dd.len();
    let mut last_nonzero = if dd[0] != 0 { Some(0) } else { None };
    for level in 1..n {
        let inv = modp::inv(level as u64 % p, p);
        for i in (level..n).rev() {
            dd[i] = (dd[i] + p - dd[i - 1]) % p * inv % p;
        }
        if dd[level] != 0 {
            last_nonzero = Some(level);
        }
    }
    last_nonzero
}

/// Determinant of a square matrix mod `p` by elimination with pivoting.
fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] != 0) else { return 0 };
        if piv != c {
            m.swap(piv, c);
            det = (p - det) % p;
        }
        det = det * m[c][c] % p;
        let inv = modp::inv(m[c][c], p);
        for r in c + 1..n {
            let f = m[r][c] * inv % p;
            if f == 0 {
                continue;
            }
            for k in c..n {
                m[r][k] = (m[r][k] + p - f * m[c][k] % p) % p;
            }
        }
    }
    det
}

fn random_line(rng: &mut ChaCha8Rng, p: u64) -> Line {
    Line { x0: rng.gen_range(1..p), y0: rng.gen_range(1..p), bx: rng.gen_range(1..p), by: rng.gen_range(1..p) }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeAudit {
    pub j: usize,
    pub degree: Option<usize>,
    pub bound: usize,
}

impl DegreeAudit {
    pub fn holds(&self) -> bool {
        self.degree.is_none_or(|d| d <= self.bound)
    }
}

/// Degrees of `W_1, ..., W_mu(k)` modulo a large prime, with `j(k + jd)`.
/// Each value is exact unless it exceeds `bound + 3`, in which case the
/// reported degree is `bound + 4` or more (a violation either way).
pub fn wronskian_degrees_modular(curve: &PlaneCurve, k: usize, seed: u64) -> Result<Vec<DegreeAudit>> {
    let d = curve.degree() as usize;
    if k == 0 || k >= d {
        return Err(Error::Precondition(format!("need 0 < k < d (k = {k}, d = {d})")));
    }
    let basis = MonomialBasis::new(k);
    let n = basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<Option<usize>> = vec![None; n];
    for &p in &PRIMES {
        let px = ModBi::from_z(curve.zpx(), p);
        let py = ModBi::from_z(curve.zpy(), p);
        let apply = |f: &ModBi| py.mul(&f.deriv(Axis::X)).sub(&px.mul(&f.deriv(Axis::Y)));
        let line = random_line(&mut rng, p);
        // entries[i][m] = (L^i f_m) restricted to the line
        let mut entries = vec![vec![Vec::new(); n]; n];
        for m in 0..n {
            let mut f = ModBi::from_z(&basis.zpoly(m), p);
            for row in entries.iter_mut() {
                row[m] = f.restrict(&line);
                f = apply(&f);
            }
        }
        let bounds: Vec<usize> = (1..=n).map(|j| wronskian_degree_bound(j, k, d) as usize).collect();
        let nodes = bounds[n - 1] + 4;
        let mut values = vec![Vec::with_capacity(nodes); n];
        for t in 0..nodes as u64 {
            let mat: Vec<Vec<u64>> =
                entries.iter().map(|row| row.iter().map(|e| eval_uni(e, t, p)).collect()).collect();
            for (j, vals) in values.iter_mut().enumerate() {
                let sub: Vec<Vec<u64>> = mat[..=j].iter().map(|r| r[..=j].to_vec()).collect();
                vals.push(det_mod(sub, p));
            }
        }
        for j in 0..n {
            let used = (bounds[j] + 4).min(nodes);
            let deg = interpolated_degree(&values[j][..used], p);
            best[j] = best[j].max(deg);
        }
    }
    Ok(best
        .into_iter()
        .enumerate()
        .map(|(i, degree)| DegreeAudit { j: i + 1, degree, bound: wronskian_degree_bound(i + 1, k, d) as usize })
        .collect())
}

/// Degrees of `Q_{axis,0..=r}` for the source `q` modulo a large prime,
/// with the bounds `deg q + 2dj`.
pub fn rescaled_degrees_modular(
    curve: &PlaneCurve,
    q: &ZBiPoly,
    axis: Axis,
    r: usize,
    seed: u64,
) -> Result<Vec<DegreeAudit>> {
    let d = curve.degree() as usize;
    let dq = q.total_degree().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<Option<usize>> = vec![None; r + 1];
    for &p in &PRIMES {
        let (a, b) = match axis {
            Axis::X => (ModBi::from_z(curve.zpy(), p), ModBi::from_z(curve.zpx(), p)),
            Axis::Y => (ModBi::from_z(curve.zpx(), p), ModBi::from_z(curve.zpy(), p)),
        };
        if a.terms().next().is_none() {
            return Err(Error::DegenerateAxis(format!("{axis:?}").to_lowercase()));
        }
        let other = axis.other();
        let line = random_line(&mut rng, p);
        let mut f = ModBi::from_z(q, p);
        best[0] = best[0].max(degree_of(&f.restrict(&line)));
        if r == 0 {
            continue;
        }
        f = a.mul(&f.deriv(axis)).sub(&b.mul(&f.deriv(other)));
        best[1] = best[1].max(degree_of(&f.restrict(&line)));
        let a2 = a.mul(&a);
        let ab = a.mul(&b);
        let corr = a.mul(&a.deriv(axis)).sub(&b.mul(&a.deriv(other)));
        for j in 1..r {
            let t1 = a2.mul(&f.deriv(axis)).sub(&ab.mul(&f.deriv(other)));
            let c = (2 * j as u64 - 1) % p;
            f = t1.lin(1, &f.mul(&corr), (p - c) % p);
            best[j + 1] = best[j + 1].max(degree_of(&f.restrict(&line)));
        }
    }
    Ok(best
        .into_iter()
        .enumerate()
        .map(|(j, degree)| DegreeAudit { j, degree, bound: dq + 2 * d * j })
        .collect())
}

/// Convenience: the integer polynomial `y` or `x` used as the source of the
/// rescaled numerators along `axis`.
pub fn coordinate_source(axis: Axis) -> ZBiPoly {
    match axis {
        Axis::X => ZBiPoly::monomial(BigInt::from(1), 0, 1),
        Axis::Y => ZBiPoly::monomial(BigInt::from(1), 1, 0),
    }
}
