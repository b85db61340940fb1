//! Plane curves `P = 0` with the preconditions the counting machinery needs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::bipoly::{Axis, BiPoly};
use crate::error::{Error, Result};
use crate::modp::{factor_degrees, possible_degrees, PolyP, PRIMES};
use crate::resultant::res_z;
use crate::zbipoly::ZBiPoly;
use crate::zpoly::ZPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurve {
    defining: BiPoly,
    degree: u32,
    z: ZBiPoly,
    px: ZBiPoly,
    py: ZBiPoly,
}

/// Outcome of the line-restriction irreducibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    /// Some restriction was proven irreducible over the rationals.
    Irreducible,
    /// Every restriction admits a factor of one of these degrees.
    LikelyReducible(Vec<usize>),
    /// No line gave a certificate either way.
    Inconclusive,
}

impl PlaneCurve {
    /// Builds a curve after checking degree, square-freeness and the
    /// irreducibility diagnostic. The stored polynomial is the integer
    /// multiple of `p` with content 1 (sign kept).
    pub fn new(p: &BiPoly) -> Result<PlaneCurve> {
        let c = PlaneCurve::new_unchecked(p)?;
        if !c.is_square_free() {
            return Err(Error::NotSquareFree);
        }
        if let IrreducibilityVerdict::LikelyReducible(_) = c.irreducibility_diagnostic(8) {
            return Err(Error::Reducible);
        }
        Ok(c)
    }

    /// Only the degree check; used for images of already validated curves.
    pub fn new_unchecked(p: &BiPoly) -> Result<PlaneCurve> {
        match p.total_degree() {
            None | Some(0) => return Err(Error::NonPositiveDegree),
            Some(_) => {}
        }
        let z = p.to_primitive_zbi();
        let defining = BiPoly::from_zbi(&z);
        Ok(PlaneCurve {
            degree: defining.total_degree().unwrap(),
            px: z.dx(),
            py: z.dy(),
            defining,
            z,
        })
    }

    pub fn parse(text: &str) -> Result<PlaneCurve> {
        PlaneCurve::new(&BiPoly::parse(text)?)
    }

    pub fn defining(&self) -> &BiPoly {
        &self.defining
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn zpoly(&self) -> &ZBiPoly {
        &self.z
    }

    pub fn zpx(&self) -> &ZBiPoly {
        &self.px
    }

    pub fn zpy(&self) -> &ZBiPoly {
        &self.py
    }

    pub fn px(&self) -> BiPoly {
        self.defining.partial_derivative(Axis::X)
    }

    pub fn py(&self) -> BiPoly {
        self.defining.partial_derivative(Axis::Y)
    }

    /// No repeated factor: `Res_y(P, P_y)` and `Res_x(P, P_x)` are nonzero
    /// whenever the derivative is.
    pub fn is_square_free(&self) -> bool {
        for (d, axis) in [(&self.py, Axis::Y), (&self.px, Axis::X)] {
            if !d.is_zero() && res_z(&self.z, d, axis).is_zero() {
                return false;
            }
        }
        true
    }

    /// Restricts `P` to random lines and factors the restrictions modulo
    /// several primes. A restriction whose mod-p factor degrees admit no
    /// proper subset sum is irreducible over the rationals, hence so is `P`.
    pub fn irreducibility_diagnostic(&self, lines: usize) -> IrreducibilityVerdict {
        let d = self.degree as usize;
        if d == 1 {
            return IrreducibilityVerdict::Irreducible;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x1ea5_eed);
        let mut common: Option<Vec<bool>> = None;
        let mut tested = 0;
        let mut attempts = 0;
        while tested < lines && attempts < 20 * lines {
            attempts += 1;
            let (a, c) = loop {
                let a: i64 = rng.gen_range(-6..=6);
                let c: i64 = rng.gen_range(-6..=6);
                if a != 0 || c != 0 {
                    break (a, c);
                }
            };
            let b: i64 = rng.gen_range(-9..=9);
            let e: i64 = rng.gen_range(-9..=9);
            let f = restrict_to_line(&self.z, a, b, c, e);
            if f.degree() != Some(d) || f.square_free_part().degree() != Some(d) {
                continue;
            }
            tested += 1;
            let mut can = vec![true; d + 1];
            for &p in PRIMES.iter() {
                let fp = PolyP::from_zpoly(&f, p);
                if fp.degree() != Some(d) || fp.gcd(&fp.derivative()).degree() != Some(0) {
                    continue;
                }
                let pd = possible_degrees(&factor_degrees(&fp));
                for s in 0..=d {
                    can[s] &= pd[s];
                }
            }
            if (1..d).all(|s| !can[s]) {
                return IrreducibilityVerdict::Irreducible;
            }
            common = Some(match common {
                None => can,
                Some(prev) => prev.iter().zip(&can).map(|(x, y)| *x && *y).collect(),
            });
        }
        match common {
            Some(c) if tested == lines => {
                let degs: Vec<usize> = (1..d).filter(|&s| c[s]).collect();
                if degs.is_empty() {
                    IrreducibilityVerdict::Inconclusive
                } else {
                    IrreducibilityVerdict::LikelyReducible(degs)
                }
            }
            _ => IrreducibilityVerdict::Inconclusive,
        }
    }

    /// Same zero set with content removed; images under coordinate maps.
    pub fn map_poly(&self, f: impl Fn(&BiPoly) -> BiPoly) -> Result<PlaneCurve> {
        PlaneCurve::new_unchecked(&f(&self.defining))
    }
}

/// `P(a t + b, c t + e)` as an integer polynomial in `t`.
pub fn restrict_to_line(z: &ZBiPoly, a: i64, b: i64, c: i64, e: i64) -> ZPoly {
    let lx = ZPoly::from_i64(&[b, a]);
    let ly = ZPoly::from_i64(&[e, c]);
    let mut acc = ZPoly::zero();
    for row in z.rows().iter().rev() {
        acc = &(&acc * &ly) + &compose(row, &lx);
    }
    acc
}

/// `f(g(t))` by Horner.
pub fn compose(f: &ZPoly, g: &ZPoly) -> ZPoly {
    let mut acc = ZPoly::zero();
    for c in f.coeffs().iter().rev() {
        acc = &(&acc * g) + &ZPoly::constant(c.clone());
    }
    acc
}

impl Serialize for PlaneCurve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PlaneCurve", 2)?;
        st.serialize_field("poly", &self.defining.to_string())?;
        st.serialize_field("degree", &self.degree)?;
        st.end()
    }
}

impl std::fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.defining.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_and_rejects() {
        assert_eq!(PlaneCurve::parse("y - x^2").unwrap().degree(), 2);
        assert_eq!(PlaneCurve::parse("x^2 + y^2 - 1").unwrap().degree(), 2);
        assert!(matches!(PlaneCurve::parse("y^2 - x^2"), Err(Error::Reducible)));
        assert!(matches!(PlaneCurve::parse("(y - x^2)^2"), Err(Error::NotSquareFree)));
        assert!(matches!(PlaneCurve::parse("(x - 1)^2"), Err(Error::NotSquareFree)));
        assert!(matches!(PlaneCurve::parse("7"), Err(Error::NonPositiveDegree)));
        assert!(matches!(PlaneCurve::parse("0"), Err(Error::NonPositiveDegree)));
        assert!(matches!(PlaneCurve::parse("(x^2 + y^2 - 1)*(x*y - 2)"), Err(Error::Reducible)));
        assert!(PlaneCurve::parse("x^5 + y^5 - 1").is_ok());
        assert!(PlaneCurve::parse("y^2 - x^3 - 17").is_ok());
    }

    #[test]
    fn integer_normal_form() {
        let c = PlaneCurve::parse("x^2/2 + y^2/2 - 1/2").unwrap();
        assert_eq!(c.defining(), &BiPoly::parse("x^2 + y^2 - 1").unwrap());
    }

    #[test]
    fn line_restriction() {
        let z = BiPoly::parse("x*y - 6").unwrap().to_integer().0;
        // x = t, y = 2t + 1: 2t^2 + t - 6
        assert_eq!(restrict_to_line(&z, 1, 0, 2, 1), ZPoly::from_i64(&[-6, 1, 2]));
    }
}
