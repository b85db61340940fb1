//! End-to-end counting: parameter choice, certified unit-box counts per
//! symmetric image, oracle cross-checks, curve families and the
//! hypersurface slicing demo.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arcs::{decompose_arcs, ArcDecomposition, Direction, Location};
use crate::bipoly::{mu, BiPoly};
use crate::curve::{IrreducibilityVerdict, PlaneCurve};
use crate::differential::wronskian_work_degree;
use crate::error::{Error, Result};
use crate::interpolation::{count_intersections_on_arc, cover_arc_points};
use crate::points::{
    count_via_box, enumerate_hypersurface_points, count_hypersurface_direct, enumerate_rational_points, RationalPoint,
};
use crate::parse::SparsePoly;
use crate::rational::serde_rational;
use crate::solve::Rect;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    ExactCount,
    CertifyOnly,
    BruteOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Guardrails {
    pub max_degree: u32,
    pub max_k: usize,
    #[serde(rename = "max_H")]
    pub max_h: u64,
    /// Limit on `deg(image) * (estimated degree of the largest stratum
    /// polynomial)`; images above it are counted by enumeration.
    pub strata_cost: usize,
}

impl Default for Guardrails {
    fn default() -> Self {
        Guardrails { max_degree: 8, max_k: 8, max_h: 5000, strata_cost: 300 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    #[serde(rename = "H")]
    pub h: u64,
    pub k_override: Option<usize>,
    pub r_override: Option<usize>,
    pub mode: Mode,
    pub guardrails: Guardrails,
    /// Ignore guardrails.
    pub force: bool,
    /// Constant `c` of the main bound in the report.
    #[serde(with = "serde_rational")]
    pub c: BigRational,
    pub kappas: Vec<u32>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            h: 10,
            k_override: None,
            r_override: None,
            mode: Mode::ExactCount,
            guardrails: Guardrails::default(),
            force: false,
            c: BigRational::one(),
            kappas: vec![0, 1, 2],
        }
    }
}

impl PipelineConfig {
    pub fn with_height(h: u64) -> Self {
        PipelineConfig { h, ..Default::default() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Certified,
    BruteFallback,
}

/// `k = max(2, ceil(ln H))`, `r = mu(k)`; certified when `2 < d` and `k < d`.
pub fn choose_parameters(h: u64, d: u32) -> (usize, usize, Regime) {
    let k = default_k(h);
    (k, mu(k), regime_for(k, d))
}

fn default_k(h: u64) -> usize {
    let ln = (h.max(1) as f64).ln();
    (ln.ceil() as usize).max(2)
}

fn regime_for(k: usize, d: u32) -> Regime {
    if d > 2 && k < d as usize {
        Regime::Certified
    } else {
        Regime::BruteFallback
    }
}

/// Closed rational interval returned by the bound evaluator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Enclosure of `ln q` for `q >= 1` with width at most about `2^-prec`:
/// `ln q = m ln 2 + 2 atanh(z)` with `z = (t-1)/(t+1)`, `t = q/2^m` in `[1, 2)`.
fn ln_enclosure(q: &BigRational, prec: u32) -> (BigRational, BigRational) {
    assert!(*q >= BigRational::one());
    let two = rat(2, 1);
    let mut t = q.clone();
    let mut m: i64 = 0;
    while t >= two {
        t /= &two;
        m += 1;
    }
    let atanh2 = |z: &BigRational| -> (BigRational, BigRational) {
        // 2 sum z^(2n+1)/(2n+1); tail after N terms below 2 z^(2N+1) / (1 - z^2).
        let z2 = z * z;
        let mut term = z.clone();
        let mut sum = BigRational::zero();
        let eps = BigRational::new(BigInt::one(), BigInt::one() << prec);
        let mut n = 0i64;
        loop {
            sum += &term / BigRational::from_integer((2 * n + 1).into());
            term = &term * &z2;
            n += 1;
            let tail = &term / (BigRational::one() - &z2);
            if tail < eps {
                let s = &sum * &two;
                return (s.clone(), s + tail * &two);
            }
        }
    };
    let (l2lo, l2hi) = atanh2(&rat(1, 3));
    let z = (&t - BigRational::one()) / (&t + BigRational::one());
    let (alo, ahi) = atanh2(&z);
    let mb = BigRational::from_integer(m.into());
    (&mb * l2lo + alo, &mb * l2hi + ahi)
}

fn exact_int_root(a: &BigInt, n: u32) -> Option<BigInt> {
    let guess = a.to_f64()?.powf(1.0 / n as f64).round();
    let g = BigInt::from(guess as u64);
    (num_traits::pow(g.clone(), n as usize) == *a).then_some(g)
}

/// Enclosure of `a^(1/n)` for rational `a >= 0`: exact when the root is
/// rational with small parts, exact bisection otherwise.
fn root_enclosure(a: &BigRational, n: u32, prec: u32) -> (BigRational, BigRational) {
    if let (Some(p), Some(q)) = (exact_int_root(a.numer(), n), exact_int_root(a.denom(), n)) {
        let v = BigRational::new(p, q);
        return (v.clone(), v);
    }
    let mut lo = BigRational::zero();
    let mut hi = a.clone().max(BigRational::one());
    let eps = BigRational::new(BigInt::one(), BigInt::one() << prec);
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / rat(2, 1);
        if num_traits::pow(mid.clone(), n as usize) <= *a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn to_f64_down(q: &BigRational) -> f64 {
    let v = q.to_f64().unwrap_or(f64::NEG_INFINITY);
    if BigRational::from_float(v).is_some_and(|w| w > *q) { v.next_down() } else { v }
}

fn to_f64_up(q: &BigRational) -> f64 {
    let v = q.to_f64().unwrap_or(f64::INFINITY);
    if BigRational::from_float(v).is_some_and(|w| w < *q) { v.next_up() } else { v }
}

/// Certified enclosure of `c * d^2 * H^(2/d) * (ln H)^kappa` for `c >= 0`.
pub fn bound_value(d: u32, h: u64, c: &BigRational, kappa: u32) -> Enclosure {
    assert!(h >= 2 && d >= 1);
    let prec = 64;
    let hq = BigRational::from_integer(BigInt::from(h));
    let (plo, phi) = if 2 % d == 0 {
        let p = num_traits::pow(hq.clone(), (2 / d) as usize);
        (p.clone(), p)
    } else {
        root_enclosure(&(&hq * &hq), d, prec)
    };
    let (llo, lhi) = ln_enclosure(&hq, prec);
    let scale = c * BigRational::from_integer(BigInt::from(d * d));
    let lo = &scale * plo * num_traits::pow(llo, kappa as usize);
    let hi = &scale * phi * num_traits::pow(lhi, kappa as usize);
    Enclosure { lo: to_f64_down(&lo), hi: to_f64_up(&hi) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImageMethod {
    Certified,
    Brute,
}

/// What happened to one of the sixteen symmetric images.
#[derive(Clone, Debug, Serialize)]
pub struct ImageReport {
    pub map: String,
    pub degree: u32,
    pub method: ImageMethod,
    pub reason: Option<String>,
    pub k: usize,
    pub r: usize,
    /// Points of height at most `H` in the open unit box.
    pub box_points: usize,
    pub arcs: usize,
    pub per_arc: Vec<usize>,
    pub split_points: usize,
    pub covering_n: usize,
    pub certificates: usize,
    pub sigma_points: usize,
    pub sigma_budget: u64,
    pub pi_points: usize,
    pub pi_budget: u64,
    pub components: usize,
}

impl ImageReport {
    fn brute(map: String, degree: u32, reason: &str, box_points: usize) -> Self {
        ImageReport {
            map,
            degree,
            method: ImageMethod::Brute,
            reason: Some(reason.to_string()),
            k: 0,
            r: 0,
            box_points,
            arcs: 0,
            per_arc: Vec::new(),
            split_points: 0,
            covering_n: 0,
            certificates: 0,
            sigma_points: 0,
            sigma_budget: 0,
            pi_points: 0,
            pi_budget: 0,
            components: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counts {
    pub brute_total: Option<usize>,
    pub box_total: usize,
    pub edge_points: usize,
    pub split_points: usize,
    pub per_arc: Vec<usize>,
    #[serde(rename = "covering_N")]
    pub covering_n: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainBound {
    pub kappa: u32,
    pub value: Enclosure,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    pub main: Vec<MainBound>,
    /// `d^2 H^(2/d)`.
    pub scale: f64,
    /// `count / (d^2 H^(2/d))`.
    pub ratio: f64,
    /// `d * k * N` summed over certified coverings.
    pub bezout_alternative: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Budget {
    pub sigma_points: usize,
    pub sigma_budget: u64,
    pub pi_points: usize,
    pub pi_budget: u64,
    pub max_components: usize,
    pub harnack_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
    pub box_ms: f64,
    pub brute_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub curve: String,
    pub d: u32,
    #[serde(rename = "H")]
    pub h: u64,
    pub k: usize,
    pub r: usize,
    pub regime: Regime,
    pub mode: Mode,
    pub counts: Counts,
    pub bounds: Bounds,
    pub budget: Budget,
    pub images: Vec<ImageReport>,
    pub timings: Timings,
}

impl CountReport {
    pub fn total(&self) -> usize {
        self.counts.box_total
    }

    pub fn certified_images(&self) -> usize {
        self.images.iter().filter(|i| i.method == ImageMethod::Certified).count()
    }
}

type CachedDecomposition = std::result::Result<std::sync::Arc<ArcDecomposition>, Error>;

fn decomposition_cache() -> &'static Mutex<HashMap<(String, usize, usize), CachedDecomposition>> {
    static CACHE: std::sync::OnceLock<Mutex<HashMap<(String, usize, usize), CachedDecomposition>>> =
        std::sync::OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Arc decomposition, memoized per `(curve, k, r)` for the lifetime of the process.
pub fn cached_decomposition(curve: &PlaneCurve, k: usize, r: usize) -> CachedDecomposition {
    let key = (curve.defining().to_string(), k, r);
    if let Some(hit) = decomposition_cache().lock().expect("cache lock").get(&key) {
        return hit.clone();
    }
    let dec = decompose_arcs(curve, k, r).map(std::sync::Arc::new);
    decomposition_cache().lock().expect("cache lock").insert(key, dec.clone());
    dec
}

/// Estimated `deg(curve) * (degree of the largest stratum polynomial)`.
pub fn strata_cost(d: u32, k: usize) -> usize {
    d as usize * wronskian_work_degree(k, d as usize)
}

/// Largest `r' <= r` whose rescaled-derivative numerators stay within the
/// cost limit (at least 1).
pub fn capped_r(d: u32, r: usize, limit: usize) -> usize {
    let d = d as usize;
    let per = 2 * d.saturating_sub(2) + 1;
    let mut best = 1;
    for cand in 1..=r {
        if d * (1 + per * cand) <= limit {
            best = cand;
        }
    }
    best
}

fn open_box(p: &RationalPoint) -> bool {
    let (zero, one) = (BigRational::zero(), BigRational::one());
    p.x != zero && p.x != one && p.y != zero && p.y != one
}

fn violation(dec: &ArcDecomposition, what: &str, extra: serde_json::Value) -> Error {
    let bundle = serde_json::json!({
        "curve": dec.curve.defining().to_string(),
        "k": dec.k,
        "r": dec.r,
        "violation": what,
        "detail": extra,
    });
    Error::CertificateViolated(bundle.to_string())
}

/// Whether an algebraic coordinate is a rational of height at most `h`.
fn bounded_rational(a: &crate::AlgebraicReal, h: u64) -> bool {
    let hb = BigInt::from(h);
    match a.as_rational() {
        Some(q) => crate::rational::rational_height(q) <= hb,
        None => {
            let iv = a.interval();
            !crate::points::bounded_rational_roots(a.poly(), &iv.lo, &iv.hi, &hb, &hb).is_empty()
        }
    }
}

/// Certified count of the points of height at most `h` in the open unit
/// box: every point is located on an arc or at a split point, the points of
/// each arc are covered by auxiliary curves of degree `k`, and each
/// auxiliary curve is checked to meet its arc in fewer than `mu(k)` points.
pub fn certified_box_points(dec: &ArcDecomposition, h: u64) -> Result<(Vec<RationalPoint>, ImageReport)> {
    let k = dec.k;
    let pts: Vec<RationalPoint> =
        enumerate_rational_points(&dec.curve, h, Some(&Rect::unit())).into_iter().filter(open_box).collect();
    let mut on_arc: Vec<Vec<RationalPoint>> = vec![Vec::new(); dec.arcs.len()];
    let mut at_split = std::collections::BTreeSet::new();
    for p in &pts {
        match dec.locate_rational(&p.x, &p.y)? {
            Some(Location::OnArc(a)) => on_arc[a].push(p.clone()),
            Some(Location::Split(i)) => {
                at_split.insert(i);
            }
            None => return Err(violation(dec, "point not located", serde_json::json!(p))),
        }
    }
    let expected_split = dec
        .split_points
        .points
        .iter()
        .filter(|s| {
            let inside = |a: &crate::AlgebraicReal| {
                a.cmp_rational(&BigRational::zero()).is_gt() && a.cmp_rational(&BigRational::one()).is_lt()
            };
            inside(&s.x) && inside(&s.y) && bounded_rational(&s.x, h) && bounded_rational(&s.y, h)
        })
        .count();
    if expected_split != at_split.len() {
        return Err(violation(
            dec,
            "split point census",
            serde_json::json!({"located": at_split.len(), "expected": expected_split}),
        ));
    }
    let bound = mu(k);
    let results: Vec<Result<(usize, usize)>> = on_arc
        .par_iter_mut()
        .enumerate()
        .map(|(a, arc_pts)| {
            match dec.arcs[a].direction {
                Direction::XMonotone => arc_pts.sort_by(|p, q| (&p.x, &p.y).cmp(&(&q.x, &q.y))),
                Direction::YMonotone => arc_pts.sort_by(|p, q| (&p.y, &p.x).cmp(&(&q.y, &q.x))),
            }
            if arc_pts.is_empty() {
                return Ok((0, 0));
            }
            let cover = cover_arc_points(arc_pts, k)?;
            for c in &cover.curves {
                let count = count_intersections_on_arc(dec, &c.poly, a)?;
                if count >= bound || count < c.support.len() {
                    return Err(violation(
                        dec,
                        "chebyshev",
                        serde_json::json!({"arc": dec.arcs[a], "q": c.poly.to_string(), "count": count, "support": c.support.len()}),
                    ));
                }
            }
            Ok((cover.n, cover.curves.len()))
        })
        .collect();
    let mut covering_n = 0;
    let mut certificates = 0;
    for r in results {
        let (n, c) = r?;
        covering_n += n;
        certificates += c;
    }
    let report = ImageReport {
        map: String::new(),
        degree: dec.curve.degree(),
        method: ImageMethod::Certified,
        reason: None,
        k,
        r: dec.r,
        box_points: pts.len(),
        arcs: dec.arcs.len(),
        per_arc: on_arc.iter().map(Vec::len).collect(),
        split_points: at_split.len(),
        covering_n,
        certificates,
        sigma_points: dec.sigma_points,
        sigma_budget: dec.sigma_budget,
        pi_points: dec.pi_points,
        pi_budget: dec.pi_budget,
        components: dec.component_count,
    };
    if report.per_arc.iter().sum::<usize>() + report.split_points != pts.len() {
        return Err(violation(dec, "arc census", serde_json::json!(report)));
    }
    Ok((pts, report))
}

fn check_guardrails(d: u32, k: usize, cfg: &PipelineConfig) -> Result<()> {
    if cfg.force {
        return Ok(());
    }
    let g = &cfg.guardrails;
    if d > g.max_degree {
        return Err(Error::Guardrail(format!("degree {d} exceeds max_degree {}", g.max_degree)));
    }
    if k > g.max_k {
        return Err(Error::Guardrail(format!("k = {k} exceeds max_k {}", g.max_k)));
    }
    if cfg.h > g.max_h {
        return Err(Error::Guardrail(format!("H = {} exceeds max_H {}", cfg.h, g.max_h)));
    }
    Ok(())
}

/// Counts the points of one symmetric image in the closed unit box, by the
/// certified route when the regime and the cost limit allow it.
fn image_box_points(
    image: &PlaneCurve,
    label: String,
    k: usize,
    r: usize,
    regime: Regime,
    cfg: &PipelineConfig,
) -> Result<(Vec<RationalPoint>, ImageReport)> {
    let h = cfg.h;
    let di = image.degree();
    let brute = |reason: &str| {
        let pts = enumerate_rational_points(image, h, Some(&Rect::unit()));
        let n = pts.iter().filter(|p| open_box(p)).count();
        (pts, ImageReport::brute(label.clone(), di, reason, n))
    };
    if cfg.mode == Mode::BruteOnly {
        return Ok(brute("brute-only mode"));
    }
    if regime == Regime::BruteFallback {
        return Ok(brute("k >= d"));
    }
    if (di as usize) <= k || di <= 2 {
        return Ok(brute("k >= image degree"));
    }
    let limit = cfg.guardrails.strata_cost;
    if !cfg.force && strata_cost(di, k) > limit {
        if cfg.mode == Mode::CertifyOnly {
            return Err(Error::Guardrail(format!(
                "image {label} of degree {di}: strata cost {} exceeds {limit}",
                strata_cost(di, k)
            )));
        }
        return Ok(brute("strata cost guardrail"));
    }
    let r_eff = if cfg.force { r } else { capped_r(di, r, limit) };
    let dec = match cached_decomposition(image, k, r_eff) {
        Ok(dec) => dec,
        Err(Error::CertificationFailure(msg)) if cfg.mode != Mode::CertifyOnly => {
            return Ok(brute(&format!("decomposition failed: {msg}")));
        }
        Err(e) => return Err(e),
    };
    let (pts, mut rep) = certified_box_points(&dec, h)?;
    rep.map = label;
    Ok((pts, rep))
}

/// Counts the points of height at most `H` on the curve. In the certified
/// regime each of the sixteen unit-box images is counted through arcs,
/// coverings and Chebyshev certificates where affordable; in exact-count
/// mode the total is compared with direct enumeration.
pub fn run_pipeline(curve: &PlaneCurve, cfg: &PipelineConfig) -> Result<CountReport> {
    let start = Instant::now();
    if cfg.h < 1 {
        return Err(Error::Precondition("H must be positive".into()));
    }
    let d = curve.degree();
    let k = cfg.k_override.unwrap_or_else(|| default_k(cfg.h));
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let r = cfg.r_override.unwrap_or_else(|| mu(k));
    let regime = regime_for(k, d);
    check_guardrails(d, k, cfg)?;
    if cfg.mode == Mode::CertifyOnly && regime == Regime::BruteFallback {
        return Err(Error::Precondition(format!("certified path needs 2 < d and k < d (d = {d}, k = {k})")));
    }

    let reports = Mutex::new(Vec::new());
    let box_start = Instant::now();
    let bc = count_via_box(curve, cfg.h, |image, _| {
        let label = SymmetryLabel::next(&reports);
        let (pts, rep) = image_box_points(image, label, k, r, regime, cfg)?;
        reports.lock().expect("report lock").push(rep);
        Ok(pts)
    })?;
    let box_ms = box_start.elapsed().as_secs_f64() * 1e3;
    let images = reports.into_inner().expect("report lock");

    let brute_start = Instant::now();
    let brute_total = match cfg.mode {
        Mode::CertifyOnly => None,
        _ => Some(enumerate_rational_points(curve, cfg.h, None).len()),
    };
    let brute_ms = brute_start.elapsed().as_secs_f64() * 1e3;
    if let Some(b) = brute_total {
        if b != bc.total {
            let bundle = serde_json::json!({
                "curve": curve.defining().to_string(), "H": cfg.h, "k": k, "r": r,
                "violation": "box total differs from enumeration", "box_total": bc.total, "brute_total": b,
                "images": images,
            });
            return Err(Error::CertificateViolated(bundle.to_string()));
        }
    }

    let certified: Vec<&ImageReport> = images.iter().filter(|i| i.method == ImageMethod::Certified).collect();
    let covering_n: usize = certified.iter().map(|i| i.covering_n).sum();
    let counts = Counts {
        brute_total,
        box_total: bc.total,
        edge_points: bc.edge_points,
        split_points: certified.iter().map(|i| i.split_points).sum(),
        per_arc: certified.iter().flat_map(|i| i.per_arc.iter().copied()).collect(),
        covering_n,
    };
    let scale = if cfg.h >= 2 { bound_value(d, cfg.h, &BigRational::one(), 0).mid() } else { (d * d) as f64 };
    let bounds = Bounds {
        main: if cfg.h >= 2 {
            cfg.kappas.iter().map(|&kappa| MainBound { kappa, value: bound_value(d, cfg.h, &cfg.c, kappa) }).collect()
        } else {
            Vec::new()
        },
        scale,
        ratio: bc.total as f64 / scale,
        bezout_alternative: certified.iter().map(|i| (i.degree as u64) * (k as u64) * i.covering_n as u64).sum(),
    };
    let max_components = certified.iter().map(|i| i.components).max().unwrap_or(0);
    let budget = Budget {
        sigma_points: certified.iter().map(|i| i.sigma_points).sum(),
        sigma_budget: certified.iter().map(|i| i.sigma_budget).sum(),
        pi_points: certified.iter().map(|i| i.pi_points).sum(),
        pi_budget: certified.iter().map(|i| i.pi_budget).sum(),
        max_components,
        harnack_ok: certified.iter().all(|i| i.components as u64 <= (i.degree as u64).pow(2)),
    };
    Ok(CountReport {
        curve: curve.defining().to_string(),
        d,
        h: cfg.h,
        k,
        r,
        regime,
        mode: cfg.mode,
        counts,
        bounds,
        budget,
        images,
        timings: Timings { total_ms: start.elapsed().as_secs_f64() * 1e3, box_ms, brute_ms },
    })
}

/// `count_via_box` visits the images in `SymmetryMap::all()` order.
struct SymmetryLabel;

impl SymmetryLabel {
    fn next(reports: &Mutex<Vec<ImageReport>>) -> String {
        let i = reports.lock().expect("report lock").len();
        crate::points::SymmetryMap::all()[i].label()
    }
}

pub const CSV_VERSION_LINE: &str = "#polya-pila v1";

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8");
    format!("{CSV_VERSION_LINE}\n{body}")
}

const REPORT_HEADER: [&str; 15] = [
    "curve", "d", "H", "k", "r", "regime", "brute_total", "box_total", "split_points", "arcs", "covering_N",
    "certified_images", "scale", "ratio", "bezout_alternative",
];

fn report_row(r: &CountReport) -> Vec<String> {
    vec![
        r.curve.clone(),
        r.d.to_string(),
        r.h.to_string(),
        r.k.to_string(),
        r.r.to_string(),
        serde_json::to_value(r.regime).expect("enum").as_str().unwrap_or("").to_string(),
        r.counts.brute_total.map(|b| b.to_string()).unwrap_or_default(),
        r.counts.box_total.to_string(),
        r.counts.split_points.to_string(),
        r.counts.per_arc.len().to_string(),
        r.counts.covering_n.to_string(),
        r.certified_images().to_string(),
        format!("{:.6}", r.bounds.scale),
        format!("{:.6}", r.bounds.ratio),
        r.bounds.bezout_alternative.to_string(),
    ]
}

/// One-row CSV of a report (no timings, so reruns give identical bytes).
pub fn report_csv(r: &CountReport) -> String {
    csv_text(&REPORT_HEADER, vec![report_row(r)])
}

/// Seeded dense curve of degree `d`: integer coefficients in `[-9, 9]` on
/// every monomial, nonzero on `x^d` and `y^d`, redrawn until square-free
/// and not flagged reducible.
pub fn random_dense_curve(d: u32, rng: &mut impl Rng) -> PlaneCurve {
    loop {
        let mut terms = Vec::new();
        for t in 0..=d {
            for j in 0..=t {
                let i = t - j;
                let mut c: i64 = rng.gen_range(-9..=9);
                if t == d && (i == 0 || j == 0) && c == 0 {
                    c = 1;
                }
                terms.push(((i, j), c));
            }
        }
        if let Ok(c) = PlaneCurve::new(&BiPoly::from_i64_terms(&terms)) {
            if !matches!(c.irreducibility_diagnostic(8), IrreducibilityVerdict::LikelyReducible(_)) {
                return c;
            }
        }
    }
}

/// Curve families for [`run_family`].
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `x^d + y^d - 1` for `d` in the inclusive range.
    Fermat { lo: u32, hi: u32 },
    RandomDense { d: u32, count: usize, seed: u64 },
    CircleLike,
    Curves(Vec<String>),
}

impl Family {
    /// `fermat:3-6`, `fermat:5`, `random-dense:5[:count]`, `circle-like`,
    /// `file:PATH` (one curve per line, `#` comments).
    pub fn parse(spec: &str, seed: u64) -> Result<Family> {
        let bad = || Error::Parse(format!("family spec {spec:?}"));
        let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        match name {
            "fermat" => {
                let (lo, hi) = match rest.split_once(['-', '.']) {
                    Some((a, b)) => (num(a)?, num(b.trim_start_matches('.'))?),
                    None => (num(rest)?, num(rest)?),
                };
                if lo < 1 || hi < lo {
                    return Err(bad());
                }
                Ok(Family::Fermat { lo, hi })
            }
            "random-dense" => {
                let mut parts = rest.split(':');
                let d = num(parts.next().ok_or_else(bad)?)?;
                let count = match parts.next() {
                    Some(c) => num(c)? as usize,
                    None => 3,
                };
                if d < 1 {
                    return Err(bad());
                }
                Ok(Family::RandomDense { d, count, seed })
            }
            "circle-like" => Ok(Family::CircleLike),
            "file" => {
                let text = std::fs::read_to_string(rest).map_err(|e| Error::Parse(format!("{rest}: {e}")))?;
                Ok(Family::Curves(
                    text.lines()
                        .map(|l| l.split('#').next().unwrap_or("").trim())
                        .filter(|l| !l.is_empty())
                        .map(str::to_string)
                        .collect(),
                ))
            }
            _ => Err(bad()),
        }
    }

    /// Curve expressions of the family, in a fixed order.
    pub fn curves(&self) -> Vec<String> {
        match self {
            Family::Fermat { lo, hi } => (*lo..=*hi).map(|d| format!("x^{d} + y^{d} - 1")).collect(),
            Family::RandomDense { d, count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*count).map(|_| random_dense_curve(*d, &mut rng).defining().to_string()).collect()
            }
            Family::CircleLike => ["x^2 + y^2 - 1", "x^2 + y^2 - 2", "x^2 + y^2 - 3", "x^2 + y^2 - 5", "x^2 + 2*y^2 - 3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            Family::Curves(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRow {
    pub curve: String,
    pub d: Option<u32>,
    #[serde(rename = "H")]
    pub h: u64,
    pub count: Option<usize>,
    pub scale: Option<f64>,
    pub ratio: Option<f64>,
    pub certified_images: Option<usize>,
    pub fitted_kappa: Option<f64>,
    pub kappa_residual: Option<f64>,
    pub status: String,
}

/// Least-squares slope of `ln(ratio)` against `ln ln H` over the three
/// largest `H` with a positive ratio, with the RMS residual.
pub fn fit_kappa(points: &[(u64, f64)]) -> Option<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(h, r)| *h >= 3 && *r > 0.0)
        .map(|&(h, r)| ((h as f64).ln().ln(), r.ln()))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tail = &pts[pts.len().saturating_sub(3)..];
    if tail.len() < 3 {
        return None;
    }
    let n = tail.len() as f64;
    let mx = tail.iter().map(|p| p.0).sum::<f64>() / n;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx;
    let rss: f64 = tail.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    Some((slope, (rss / n).sqrt()))
}

/// Runs the pipeline for every `(curve, H)` pair; failures become rows
/// with an error status.
pub fn run_family(curves: &[String], h_list: &[u64], cfg: &PipelineConfig) -> Vec<FamilyRow> {
    let jobs: Vec<(usize, u64)> = (0..curves.len()).flat_map(|c| h_list.iter().map(move |&h| (c, h))).collect();
    let mut rows: Vec<(usize, FamilyRow)> = jobs
        .par_iter()
        .map(|&(ci, h)| {
            let text = &curves[ci];
            let run = PlaneCurve::parse(text).and_then(|c| run_pipeline(&c, &PipelineConfig { h, ..cfg.clone() }));
            let row = match run {
                Ok(rep) => FamilyRow {
                    curve: text.clone(),
                    d: Some(rep.d),
                    h,
                    count: Some(rep.total()),
                    scale: Some(rep.bounds.scale),
                    ratio: Some(rep.bounds.ratio),
                    certified_images: Some(rep.certified_images()),
                    fitted_kappa: None,
                    kappa_residual: None,
                    status: "ok".into(),
                },
                Err(e) => FamilyRow {
                    curve: text.clone(),
                    d: None,
                    h,
                    count: None,
                    scale: None,
                    ratio: None,
                    certified_images: None,
                    fitted_kappa: None,
                    kappa_residual: None,
                    status: format!("error: {e}"),
                },
            };
            (ci, row)
        })
        .collect();
    rows.sort_by_key(|(ci, r)| (*ci, r.h));
    for ci in 0..curves.len() {
        let pts: Vec<(u64, f64)> =
            rows.iter().filter(|(c, _)| *c == ci).filter_map(|(_, r)| Some((r.h, r.ratio?))).collect();
        if let Some((kappa, res)) = fit_kappa(&pts) {
            for (_, r) in rows.iter_mut().filter(|(c, _)| *c == ci) {
                r.fitted_kappa = Some(kappa);
                r.kappa_residual = Some(res);
            }
        }
    }
    rows.into_iter().map(|(_, r)| r).collect()
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn opt_f(v: &Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

pub fn family_csv(rows: &[FamilyRow]) -> String {
    csv_text(
        &["curve", "d", "H", "count", "scale", "ratio", "certified_images", "fitted_kappa", "kappa_residual", "status"],
        rows.iter()
            .map(|r| {
                vec![
                    r.curve.clone(),
                    opt(&r.d),
                    r.h.to_string(),
                    opt(&r.count),
                    opt_f(&r.scale),
                    opt_f(&r.ratio),
                    opt(&r.certified_images),
                    opt_f(&r.fitted_kappa),
                    opt_f(&r.kappa_residual),
                    r.status.clone(),
                ]
            })
            .collect(),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct DgcRow {
    #[serde(rename = "H")]
    pub h: u64,
    pub direct: u64,
    pub slice_sum: u64,
    pub slices: usize,
    /// `direct / H`.
    pub ratio: f64,
}

/// Integral points of `f(x1, x2, x3) = 0` with `|xi| <= H`, counted
/// directly and as a sum over the plane slices `x1 = c`.
pub fn dgc_demo(f: &SparsePoly, h_list: &[u64]) -> Result<Vec<DgcRow>> {
    h_list
        .iter()
        .map(|&h| {
            let direct = count_hypersurface_direct(f, h)?;
            let sliced = enumerate_hypersurface_points(f, h)?;
            let slice_sum = sliced.slices.iter().map(|(_, n)| n).sum();
            Ok(DgcRow { h, direct, slice_sum, slices: sliced.slices.len(), ratio: direct as f64 / h.max(1) as f64 })
        })
        .collect()
}

pub fn dgc_csv(rows: &[DgcRow]) -> String {
    csv_text(
        &["H", "direct", "slice_sum", "slices", "ratio"],
        rows.iter()
            .map(|r| {
                vec![r.h.to_string(), r.direct.to_string(), r.slice_sum.to_string(), r.slices.to_string(), format!("{:.6}", r.ratio)]
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> PlaneCurve {
        PlaneCurve::parse(s).unwrap()
    }

    #[test]
    fn parameters() {
        assert_eq!(choose_parameters(20, 5), (3, 10, Regime::Certified));
        assert_eq!(choose_parameters(1_000_000, 3), (14, 120, Regime::BruteFallback));
        assert_eq!(choose_parameters(2, 4), (2, 6, Regime::Certified));
        assert_eq!(choose_parameters(100, 2).2, Regime::BruteFallback);
    }

    #[test]
    fn bound_values() {
        let one = BigRational::one();
        let b = bound_value(2, 4, &one, 0);
        assert_eq!((b.lo, b.hi), (16.0, 16.0));
        let b = bound_value(2, 4, &one, 2);
        assert!(b.lo >= 30.7 && b.hi <= 30.8 && b.hi - b.lo < 1e-9, "{b:?}");
        // 16 (ln 4)^2 from a separately summed series for ln 2.
        let ln2: f64 = (1..200).map(|n| 1.0 / (n as f64 * 2f64.powi(n))).sum();
        assert!(b.contains(16.0 * (2.0 * ln2).powi(2)) || (b.mid() - 16.0 * (2.0 * ln2).powi(2)).abs() < 1e-12);
        let b = bound_value(4, 16, &one, 0);
        assert_eq!((b.lo, b.hi), (64.0, 64.0));
        let b = bound_value(3, 10, &one, 1);
        let v = 9.0 * 100f64.cbrt() * 10f64.ln();
        assert!(b.lo <= v + 1e-9 && v - 1e-9 <= b.hi);
    }

    #[test]
    fn named_counts() {
        let rep = run_pipeline(&c("x^2 + y^2 - 1"), &PipelineConfig::with_height(5)).unwrap();
        assert_eq!(rep.total(), 12);
        assert_eq!(rep.counts.brute_total, Some(12));
        let rep = run_pipeline(&c("y - x^2"), &PipelineConfig::with_height(4)).unwrap();
        assert_eq!(rep.total(), 7);
        assert_eq!(rep.regime, Regime::BruteFallback);
    }

    #[test]
    fn cubic_uses_certified_images() {
        let rep = run_pipeline(&c("x^3 + y^3 - 1"), &PipelineConfig::with_height(5)).unwrap();
        assert_eq!(rep.regime, Regime::Certified);
        assert!(rep.certified_images() > 0);
        assert_eq!(Some(rep.total()), rep.counts.brute_total);
        assert!(rep.budget.harnack_ok);
    }

    #[test]
    fn certify_only_refuses_brute_regime() {
        let cfg = PipelineConfig { mode: Mode::CertifyOnly, ..PipelineConfig::with_height(5) };
        assert!(matches!(run_pipeline(&c("y - x^2"), &cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn guardrail_refusal() {
        let cfg = PipelineConfig { h: 100_000, ..Default::default() };
        assert!(matches!(run_pipeline(&c("x^3 + y^3 - 1"), &cfg), Err(Error::Guardrail(_))));
    }

    #[test]
    fn families() {
        let f = Family::parse("fermat:3-6", 0).unwrap();
        assert_eq!(f.curves().len(), 4);
        let rows = run_family(&f.curves(), &[2, 3, 4], &PipelineConfig::default());
        assert_eq!(rows.len(), 12);
        assert!(rows.iter().all(|r| r.status == "ok"));
        let empty = family_csv(&run_family(&f.curves(), &[], &PipelineConfig::default()));
        assert_eq!(empty.lines().count(), 2);
        assert!(empty.starts_with(CSV_VERSION_LINE));
        let a = Family::parse("random-dense:5", 7).unwrap().curves();
        let b = Family::parse("random-dense:5", 7).unwrap().curves();
        assert_eq!(a, b);
        assert_ne!(a, Family::parse("random-dense:5", 8).unwrap().curves());
    }

    #[test]
    fn config_round_trip() {
        let cfg = PipelineConfig { k_override: Some(3), ..PipelineConfig::with_height(50) };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(PipelineConfig::from_json(&text).unwrap(), cfg);
        assert_eq!(PipelineConfig::from_json(r#"{"H": 7}"#).unwrap().h, 7);
    }

    #[test]
    fn dgc() {
        let f = crate::points::parse_trivariate("x1 + x2 + x3").unwrap();
        let rows = dgc_demo(&f, &[1]).unwrap();
        assert_eq!((rows[0].direct, rows[0].slice_sum), (7, 7));
    }
}
