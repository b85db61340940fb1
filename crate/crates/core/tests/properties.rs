use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use polya_pila::differential::{iterate_matrix, leading_minors, TangentOperator};
use polya_pila::interpolation::fit_curve;
use polya_pila::points::{enumerate_rational_points, naive_rational_points, RationalPoint};
use polya_pila::solve::common_zeros;
use polya_pila::{mu, rational_height, Axis, BiPoly, BigRational, MonomialBasis, PlaneCurve};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn poly(terms: &[((u32, u32), i64)]) -> BiPoly {
    BiPoly::from_i64_terms(terms)
}

/// Small dense curve of degree `d` with nonzero x^d and y^d.
fn small_curve() -> impl Strategy<Value = BiPoly> {
    (2u32..=3, proptest::collection::vec(-3i64..=3, 10), 1i64..=3, 1i64..=3).prop_map(|(d, cs, a, b)| {
        let mut terms = vec![((d, 0), a), ((0, d), -b)];
        let mut it = cs.into_iter();
        for i in 0..d {
            for j in 0..d - i {
                terms.push(((i, j), it.next().unwrap_or(0)));
            }
        }
        poly(&terms)
    })
}

fn sorted(mut v: Vec<RationalPoint>) -> Vec<RationalPoint> {
    v.sort();
    v.dedup();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumeration_matches_naive_scan(p in small_curve(), h in 1u64..=6) {
        let Ok(curve) = PlaneCurve::new_unchecked(&p) else { return Ok(()) };
        if !curve.is_square_free() {
            return Ok(());
        }
        let fast = sorted(enumerate_rational_points(&curve, h, None));
        let slow = sorted(naive_rational_points(&curve, h));
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn tangent_operator_kills_defining_polynomial(p in small_curve()) {
        let Ok(curve) = PlaneCurve::new_unchecked(&p) else { return Ok(()) };
        let op = TangentOperator::new(&curve);
        prop_assert!(op.apply(curve.defining()).is_zero());
    }

    #[test]
    fn tangent_operator_matches_partials(p in small_curve(), a in -5i64..5, b in -5i64..5, x in -4i64..4, y in 1i64..4) {
        let Ok(curve) = PlaneCurve::new_unchecked(&p) else { return Ok(()) };
        let op = TangentOperator::new(&curve);
        let f = poly(&[((2, 1), a), ((0, 3), b), ((1, 0), 1)]);
        let (x0, y0) = (q(x, 3), q(1, y));
        let pd = curve.defining();
        let expect = pd.partial_derivative(Axis::Y).eval(&x0, &y0) * f.partial_derivative(Axis::X).eval(&x0, &y0)
            - pd.partial_derivative(Axis::X).eval(&x0, &y0) * f.partial_derivative(Axis::Y).eval(&x0, &y0);
        prop_assert_eq!(op.apply(&f).eval(&x0, &y0), expect);
    }

    #[test]
    fn fitted_curve_vanishes_on_support(k in 1usize..=4, raw in proptest::collection::btree_set((-30i64..30, 1i64..9, -30i64..30, 1i64..9), 1..14)) {
        let pts: Vec<RationalPoint> = raw.iter().map(|&(a, b, c, d)| RationalPoint::new(q(a, b), q(c, d))).collect();
        let pts = sorted(pts);
        if pts.len() >= mu(k) {
            return Ok(());
        }
        let aux = fit_curve(&pts, k).unwrap().expect("fewer than mu(k) points always admit a curve");
        prop_assert!(!aux.poly.is_zero());
        prop_assert!(aux.poly.total_degree().unwrap_or(0) <= k as u32);
        for p in &pts {
            prop_assert!(aux.poly.eval(&p.x, &p.y).is_zero());
        }
    }

    #[test]
    fn height_is_symmetric(n in -500i64..500, d in 1i64..500) {
        let x = q(n, d);
        let h = rational_height(&x);
        prop_assert_eq!(rational_height(&-x.clone()), h.clone());
        if !x.is_zero() {
            prop_assert_eq!(rational_height(&x.recip()), h);
        }
    }

    #[test]
    fn line_pairs_meet_where_expected(ls in proptest::collection::vec((-4i64..=4, -4i64..=4, -6i64..=6), 4)) {
        // p = L0 L1, q = L2 L3; the common zeros are the pairwise line crossings.
        let line = |(a, b, c): (i64, i64, i64)| poly(&[((1, 0), a), ((0, 1), b), ((0, 0), c)]);
        for &(a, b, _) in &ls {
            if a == 0 && b == 0 {
                return Ok(());
            }
        }
        for i in 0..2 {
            for j in 2..4 {
                let (a1, b1, _) = ls[i];
                let (a2, b2, _) = ls[j];
                if a1 * b2 == a2 * b1 {
                    return Ok(());
                }
            }
        }
        let p = &line(ls[0]) * &line(ls[1]);
        let qq = &line(ls[2]) * &line(ls[3]);
        let mut expect: Vec<(BigRational, BigRational)> = Vec::new();
        for i in 0..2 {
            for j in 2..4 {
                let (a1, b1, c1) = ls[i];
                let (a2, b2, c2) = ls[j];
                let det = a1 * b2 - a2 * b1;
                let pt = (q(b1 * c2 - b2 * c1, det), q(a2 * c1 - a1 * c2, det));
                if !expect.contains(&pt) {
                    expect.push(pt);
                }
            }
        }
        let zs = common_zeros(&p, &qq, None).unwrap();
        prop_assert!(zs.len() <= 4);
        prop_assert_eq!(zs.len(), expect.len());
        for (x, y) in &expect {
            prop_assert!(zs.iter().any(|(zx, zy)| zx.cmp_rational(x) == Ordering::Equal && zy.cmp_rational(y) == Ordering::Equal));
        }
    }
}

#[test]
fn full_wronskian_vanishes_once_curve_is_in_span() {
    // With every monomial of degree <= d present, P itself is a combination
    // of the basis, so the top Wronskian must vanish at every curve point.
    let curve = PlaneCurve::parse("x^2 + y^2 - 1").unwrap();
    let op = TangentOperator::new(&curve);
    let basis = MonomialBasis::new(2);
    let funcs: Vec<_> = (0..basis.len()).map(|m| basis.zpoly(m)).collect();
    match leading_minors(iterate_matrix(&op, &funcs)) {
        Err(_) => {}
        Ok(minors) => {
            let top = BiPoly::from_zbi(minors.last().unwrap());
            for (x, y) in [(q(3, 5), q(4, 5)), (q(5, 13), q(-12, 13)), (q(-8, 17), q(15, 17)), (BigRational::one(), BigRational::zero())] {
                assert!(top.eval(&x, &y).is_zero(), "W not zero at ({x}, {y})");
            }
        }
    }
}

#[test]
fn family_csv_is_reproducible() {
    use polya_pila::pipeline::{family_csv, run_family, Family, PipelineConfig};
    let curves = Family::parse("fermat:3-4", 7).unwrap().curves();
    let cfg = PipelineConfig::default();
    let a = family_csv(&run_family(&curves, &[2, 5], &cfg));
    let b = family_csv(&run_family(&curves, &[2, 5], &cfg));
    assert_eq!(a, b);
    assert!(a.starts_with("#polya-pila v1\n"));
}

#[test]
fn tangent_fibre_points_are_found() {
    // P(-1/4, y) = -(4y + 1)^2 / 8: a double root with no sign change.
    let curve = PlaneCurve::parse("2x^2 - 3x - 2y^2 - y - 1").unwrap();
    let pts = enumerate_rational_points(&curve, 4, None);
    assert!(pts.iter().any(|p| p.x == q(-1, 4) && p.y == q(-1, 4)));
    assert_eq!(sorted(pts), sorted(naive_rational_points(&curve, 4)));
}

#[test]
fn census_splits_box_zeros_between_arcs_and_split_points() {
    use polya_pila::arcs::decompose_arcs;
    use polya_pila::interpolation::zero_census;
    use polya_pila::solve::Rect;
    let curve = PlaneCurve::parse("x^3 + y^3 - 1").unwrap();
    let dec = decompose_arcs(&curve, 2, 6).unwrap();
    for text in ["x - y", "4x^2 + 4y^2 - 3", "x*y - 1/4", "16x^2 - 8x + 1"] {
        let g = BiPoly::parse(text).unwrap();
        let census = zero_census(&dec, &g).unwrap();
        assert_eq!(census.per_arc.iter().sum::<usize>() + census.at_split_points, census.in_box, "{text}");
        let direct = common_zeros(curve.defining(), &g, Some(&Rect::unit())).unwrap();
        assert_eq!(census.in_box, direct.len(), "{text}");
    }
}
