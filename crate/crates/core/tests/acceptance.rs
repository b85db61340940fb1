//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p polya-pila --test acceptance`.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polya_pila::arcs::decompose_arcs;
use polya_pila::degree_check::{coordinate_source, rescaled_degrees_modular, wronskian_degrees_modular};
use polya_pila::error::Error;
use polya_pila::interpolation::{chebyshev_certify, fit_curve, zero_census};
use polya_pila::pipeline::{random_dense_curve, run_pipeline, CountReport, PipelineConfig};
use polya_pila::points::{
    brute_box_counter, count_hypersurface_direct, count_via_box, enumerate_hypersurface_points,
    enumerate_rational_points, parse_trivariate, RationalPoint,
};
use polya_pila::solve::common_zeros_z;
use polya_pila::strata::{pi_polys, sigma_polys, strata_points};
use polya_pila::{mu, Axis, BiPoly, MonomialBasis, PlaneCurve};

type Outcome = Result<String, String>;

const CORPUS_SEED: u64 = 2024;
const GRID: [u64; 6] = [2, 5, 10, 50, 100, 200];

fn corpus() -> Vec<PlaneCurve> {
    let mut out: Vec<PlaneCurve> = ["y - x^2", "x^2 + y^2 - 1", "x^2 + y^2 - 3", "x*y - 6", "x^3 + y^3 - 1", "x^5 + y^5 - 1"]
        .iter()
        .map(|s| PlaneCurve::parse(s).expect("corpus curve"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    for d in [4, 5, 6] {
        out.push(random_dense_curve(d, &mut rng));
    }
    out
}

fn oracle(curve: &PlaneCurve, h: u64) -> usize {
    enumerate_rational_points(curve, h, None).len()
}

/// Criterion 1 runs and their oracle totals, reused by criterion 8.
fn grid_runs(corpus: &[PlaneCurve]) -> Vec<(String, u64, Result<CountReport, Error>, usize)> {
    let mut out = Vec::new();
    for c in corpus {
        for &h in &GRID {
            let rep = run_pipeline(c, &PipelineConfig::with_height(h));
            out.push((c.defining().to_string(), h, rep, oracle(c, h)));
        }
    }
    out
}

fn criterion_1(runs: &[(String, u64, Result<CountReport, Error>, usize)], secs: f64) -> Outcome {
    let mut certified_runs = 0;
    let mut images = 0;
    for (curve, h, rep, want) in runs {
        let rep = rep.as_ref().map_err(|e| format!("{curve} H={h}: {e}"))?;
        if rep.total() != *want {
            return Err(format!("{curve} H={h}: pipeline {} vs oracle {want}", rep.total()));
        }
        if rep.certified_images() > 0 {
            certified_runs += 1;
            images += rep.certified_images();
        }
    }
    if secs > 600.0 {
        return Err(format!("took {secs:.0}s"));
    }
    Ok(format!(
        "{} runs equal the oracle; {certified_runs} runs used {images} certified box images; {secs:.1}s",
        runs.len()
    ))
}

fn criterion_2() -> Outcome {
    let cases = [("x^2 + y^2 - 1", 2, 4), ("x^2 + y^2 - 1", 5, 12), ("y - x^2", 4, 7)];
    for (text, h, want) in cases {
        let c = PlaneCurve::parse(text).map_err(|e| e.to_string())?;
        let got = run_pipeline(&c, &PipelineConfig::with_height(h)).map_err(|e| e.to_string())?.total();
        if got != want {
            return Err(format!("{text} H={h}: {got} != {want}"));
        }
    }
    Ok("circle H=2 -> 4, circle H=5 -> 12, parabola H=4 -> 7".into())
}

fn criterion_3() -> Outcome {
    const K_MAX: usize = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut checks, mut violations) = (0usize, Vec::new());
    for n in 0..100u64 {
        let d = rng.gen_range(2..=8u32);
        let c = random_dense_curve(d, &mut rng);
        for k in 1..=(d as usize - 1).min(K_MAX) {
            let w = wronskian_degrees_modular(&c, k, n).map_err(|e| e.to_string())?;
            let mut audits = w;
            for axis in [Axis::X, Axis::Y] {
                audits.extend(
                    rescaled_degrees_modular(&c, &coordinate_source(axis), axis, mu(k), n).map_err(|e| e.to_string())?,
                );
            }
            checks += audits.len();
            for a in audits.iter().filter(|a| !a.holds()) {
                violations.push(format!("{} k={k} j={} deg {:?} > {}", c.defining(), a.j, a.degree, a.bound));
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("{checks} degree checks on 100 curves (k <= min(d-1, {K_MAX})), zero violations"))
    } else {
        Err(format!("{} violations, first: {}", violations.len(), violations[0]))
    }
}

fn shifted_random_poly(k: usize, rng: &mut ChaCha8Rng) -> BiPoly {
    // sum c_ij (x - 1/2)^i (y - 1/2)^j, so that the zero set tends to cross the box
    loop {
        let mut q = BiPoly::zero();
        let half = BigRational::new(1.into(), 2.into());
        let xs = &BiPoly::x() - &BiPoly::constant(half.clone());
        let ys = &BiPoly::y() - &BiPoly::constant(half);
        for &(i, j) in &MonomialBasis::new(k).entries {
            let c: i64 = rng.gen_range(-4..=4);
            let m = &xs.pow(i) * &ys.pow(j);
            q = &q + &m.scale(&BigRational::from_integer(c.into()));
        }
        if q.total_degree().unwrap_or(0) >= 1 {
            return q;
        }
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let degrees = [3u32, 3, 3, 3, 4, 4, 4, 4, 5, 5];
    let mut triples = 0;
    let mut hits = 0;
    for &d in &degrees {
        let c = random_dense_curve(d, &mut rng);
        let k = (d as usize - 2).min(2);
        let dec = decompose_arcs(&c, k, mu(k)).map_err(|e| format!("{}: {e}", c.defining()))?;
        for _ in 0..5 {
            let q = shifted_random_poly(k, &mut rng);
            let certs = chebyshev_certify(&dec, &q).map_err(|e| format!("{} q={q}: {e}", c.defining()))?;
            hits += certs.iter().filter(|c| c.count > 0).count();
            triples += 1;
        }
    }
    // d = 5, k = 2: a conic meeting the quintic in 10 real points
    let q = BiPoly::parse("4*x^2 - 4*x + 4*y^2 - 4*y + 1").expect("literal");
    let text = "(4*x^2 - 4*x + 4*y^2 - 4*y + 1)*(x^3 + y^3 + 2) + (2*x - 1)*(2*y - 1)*(x - y)*(x + y - 1)*(x - 3*y + 1)";
    let c = PlaneCurve::parse(text).map_err(|e| e.to_string())?;
    let global = common_zeros_z(c.zpoly(), &q.to_primitive_zbi(), None).map_err(|e| e.to_string())?.len();
    if global <= mu(2) {
        return Err(format!("showcase global count {global} does not exceed mu(2)"));
    }
    let dec = decompose_arcs(&c, 2, mu(2)).map_err(|e| e.to_string())?;
    let certs = chebyshev_certify(&dec, &q).map_err(|e| e.to_string())?;
    let census = zero_census(&dec, &q).map_err(|e| e.to_string())?;
    let max_arc = certs.iter().map(|c| c.count).max().unwrap_or(0);
    Ok(format!(
        "{triples} triples certified ({hits} arcs with zeros); d=5,k=2 showcase: global {global} > 6, \
         max per arc {max_arc}, {} at split points",
        census.at_split_points
    ))
}

fn criterion_5(corpus: &[PlaneCurve]) -> Outcome {
    let mut lines = Vec::new();
    for (idx, c) in corpus.iter().enumerate() {
        let d = c.degree();
        // k = 2 where the global strata are affordable, k = 1 otherwise
        let k = if [4usize, 5, 6].contains(&idx) { 2 } else { 1 };
        let r = mu(k);
        let sigma = sigma_polys(c, k).map_err(|e| e.to_string())?;
        let pi = pi_polys(c, r).map_err(|e| e.to_string())?;
        let s = strata_points(c, &sigma, None).map_err(|e| format!("{}: {e}", c.defining()))?;
        let p = strata_points(c, &pi, None).map_err(|e| format!("{}: {e}", c.defining()))?;
        if s.len() as u64 > s.bezout_budget || p.len() as u64 > p.bezout_budget {
            return Err(format!("{}: sigma {}/{} pi {}/{}", c.defining(), s.len(), s.bezout_budget, p.len(), p.bezout_budget));
        }
        let dec = decompose_arcs(c, k, r).map_err(|e| format!("{}: {e}", c.defining()))?;
        if dec.component_count as u64 > (d as u64).pow(2) {
            return Err(format!("{}: {} components", c.defining(), dec.component_count));
        }
        lines.push(format!("d{d}:{}/{},{}/{}", s.len(), s.bezout_budget, p.len(), p.bezout_budget));
    }
    Ok(format!("|Sigma|/budget,|Pi|/budget {}; components <= d^2", lines.join(" ")))
}

fn random_point(rng: &mut ChaCha8Rng) -> RationalPoint {
    let mut q = || BigRational::new(BigInt::from(rng.gen_range(-20..=20)), BigInt::from(rng.gen_range(1..=20)));
    RationalPoint::new(q(), q())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for t in 0..1000 {
        let k = 1 + t % 5;
        let mut pts: Vec<RationalPoint> = Vec::new();
        while pts.len() < mu(k) - 1 {
            let p = random_point(&mut rng);
            if !pts.iter().any(|o| o.x == p.x && o.y == p.y) {
                pts.push(p);
            }
        }
        let fit = fit_curve(&pts, k).map_err(|e| e.to_string())?.ok_or(format!("set {t}: no curve of degree {k}"))?;
        if fit.poly.is_zero() || fit.poly.total_degree().unwrap_or(0) as usize > k {
            return Err(format!("set {t}: bad polynomial {}", fit.poly));
        }
        if let Some(p) = pts.iter().find(|p| !fit.poly.eval(&p.x, &p.y).is_zero()) {
            return Err(format!("set {t}: fitted curve misses ({}, {})", p.x, p.y));
        }
    }
    Ok("1000 sets of mu(k)-1 points (k = 1..5) fitted, exact vanishing on every support".into())
}

fn criterion_7(corpus: &[PlaneCurve]) -> Outcome {
    let mut n = 0;
    for c in corpus {
        for h in [1u64, 2, 5, 10, 50, 100] {
            let via = count_via_box(c, h, brute_box_counter).map_err(|e| e.to_string())?.total;
            let direct = oracle(c, h);
            if via != direct {
                return Err(format!("{} H={h}: box {via} vs direct {direct}", c.defining()));
            }
            n += 1;
        }
    }
    Ok(format!("{n} (curve, H <= 100) pairs: box reduction equals direct enumeration"))
}

fn criterion_8(runs: &[(String, u64, Result<CountReport, Error>, usize)]) -> Outcome {
    let mut worst: f64 = 0.0;
    for (curve, h, rep, want) in runs {
        let rep = rep.as_ref().map_err(|e| format!("{curve} H={h}: {e}"))?;
        if !rep.bounds.ratio.is_finite() {
            return Err(format!("{curve} H={h}: ratio not finite"));
        }
        if rep.total() != *want {
            return Err(format!("{curve} H={h}: total differs from oracle"));
        }
        worst = worst.max(rep.bounds.ratio);
    }
    Ok(format!("count/(d^2 H^(2/d)) finite on the grid (max {worst:.3}); totals equal the oracle"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for f in ["x1^2 + x2^2 + x3^2 - 3", "x1 + x2 + x3", "x1^3 + x2^3 + x3^3 - 3"] {
        let poly = parse_trivariate(f).map_err(|e| e.to_string())?;
        for h in [1u64, 2, 4] {
            let direct = count_hypersurface_direct(&poly, h).map_err(|e| e.to_string())?;
            let sliced: u64 =
                enumerate_hypersurface_points(&poly, h).map_err(|e| e.to_string())?.slices.iter().map(|s| s.1).sum();
            if direct != sliced {
                return Err(format!("{f} H={h}: direct {direct} vs slices {sliced}"));
            }
            parts.push(direct.to_string());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 60.0 {
        return Err(format!("took {secs:.1}s"));
    }
    Ok(format!("direct = slice sum for 3 surfaces x H in {{1,2,4}} ({}); {secs:.2}s", parts.join(",")))
}

fn report(n: usize, name: &str, outcome: &Outcome, secs: f64) -> bool {
    match outcome {
        Ok(detail) => println!("PASS criterion {n} ({name}): {detail} [{secs:.1}s]"),
        Err(why) => println!("FAIL criterion {n} ({name}): {why} [{secs:.1}s]"),
    }
    outcome.is_ok()
}

fn timed<F: FnOnce() -> Outcome>(f: F) -> (Outcome, f64) {
    let t = Instant::now();
    let o = f();
    (o, t.elapsed().as_secs_f64())
}

fn main() {
    let corpus = corpus();
    let mut ok = true;
    let t = Instant::now();
    let runs = grid_runs(&corpus);
    let grid_secs = t.elapsed().as_secs_f64();
    let (o, s) = timed(|| criterion_1(&runs, grid_secs));
    ok &= report(1, "exact-count equivalence", &o, s + grid_secs);
    let (o, s) = timed(criterion_2);
    ok &= report(2, "named small counts", &o, s);
    let (o, s) = timed(criterion_3);
    ok &= report(3, "degree bounds", &o, s);
    let (o, s) = timed(criterion_4);
    ok &= report(4, "Chebyshev certification", &o, s);
    let (o, s) = timed(|| criterion_5(&corpus));
    ok &= report(5, "structural budgets", &o, s);
    let (o, s) = timed(criterion_6);
    ok &= report(6, "interpolation", &o, s);
    let (o, s) = timed(|| criterion_7(&corpus));
    ok &= report(7, "symmetry covering", &o, s);
    let (o, s) = timed(|| criterion_8(&runs));
    ok &= report(8, "bound sanity", &o, s);
    let (o, s) = timed(criterion_9);
    ok &= report(9, "dimension-growth demo", &o, s);
    if !ok {
        std::process::exit(1);
    }
}
