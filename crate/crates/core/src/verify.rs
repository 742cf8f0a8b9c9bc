//! End-to-end checks of the bijection, the census, the schemes and the
//! series, run by the `verify` command.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::bijection::{close_rooted, close_rooted_pointed, open, open_rooted, open_rooted_pointed, Sign};
use crate::census::{
    enumerate_embedded_trees, enumerate_quadrangulations, enumerate_rooted_quadrangulations, enumerate_unrooted_well_labeled_trees,
    enumerate_well_labeled_trees, unrooted_labeled_key, Budget, QuadKind,
};
use crate::labeling::{distance_labels, normalize_min};
use crate::map_core::RotationMap;
use crate::quad_map::check_bipartite_quadrangulation;
use crate::sampler::{chi_square_uniform, distance_profile, log_log_slope, rng_for, sample_many, sample_quadrangulation_with};
use crate::schemes::{cubic_one_face_count, dominant_schemes_with, enumerate_schemes_with, scheme_shapes, SchemeLimits};
use crate::series::{
    asympt_constant, deviation_from, planar_map_count, rhat_exact_with, rhat_with, series_qg, series_q_bullet, series_t, tau_with,
    u_symmetry_check, TruncatedSeries, Var,
};

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

pub const CHECK_NAMES: [&str; 8] = [
    "planar counts",
    "bijection roundtrips",
    "torus closed forms",
    "asymptotic constants",
    "symmetry of scheme sums",
    "structural properties",
    "sampler",
    "asymptotic trend",
];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Runs check `id` in `1..=8`.
pub fn run_check(id: usize) -> CheckReport {
    let start = Instant::now();
    let outcome = match id {
        1 => planar_counts(),
        2 => bijection_roundtrips(),
        3 => torus_closed_forms(),
        4 => constants(),
        5 => symmetry(),
        6 => structural(),
        7 => sampler(),
        8 => trend(),
        _ => Err(format!("no check {id}")),
    };
    let (passed, detail) = match outcome {
        Ok(s) => (true, s),
        Err(s) => (false, s),
    };
    CheckReport {
        id,
        name: CHECK_NAMES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn run_all() -> Vec<CheckReport> {
    (1..=8).map(run_check).collect()
}

fn planar_counts() -> Outcome {
    let b = Budget::default();
    let mut counts = Vec::new();
    for n in 1..=3 {
        let c = enumerate_rooted_quadrangulations(n, 0, &b).map_err(|e| e.to_string())?.len();
        ensure(BigInt::from(c) == planar_map_count(n), || format!("n = {n}: census {c}"))?;
        counts.push(c);
    }
    let qb = series_q_bullet(0, 30).map_err(|e| e.to_string())?;
    for n in 0..=30 {
        ensure(
            *qb.coeff(n) == BigRational::from_integer(planar_map_count(n) * BigInt::from(n + 2)),
            || format!("pointed series differs at n = {n}"),
        )?;
    }
    Ok(format!("census {counts:?}; pointed series exact to order 30"))
}

fn roundtrip_case(n: usize, g: usize, b: &Budget) -> Outcome {
    let err = |e: &dyn std::fmt::Display| format!("n = {n}, g = {g}: {e}");
    let quads = enumerate_quadrangulations(n, g, QuadKind::RootedPointed, b).map_err(|e| err(&e))?;
    let trees = enumerate_embedded_trees(n, g, b).map_err(|e| err(&e))?;
    ensure(quads.len() == 2 * trees.len(), || {
        format!("n = {n}, g = {g}: {} quadrangulations, {} trees", quads.len(), trees.len())
    })?;
    quads.par_iter().try_for_each(|pq| {
        let (t, s) = open_rooted_pointed(pq).map_err(|e| err(&e))?;
        let back = close_rooted_pointed(&t, s).map_err(|e| err(&e))?;
        ensure(back.canonical_form() == pq.canonical_form(), || format!("n = {n}, g = {g}: close after open differs"))
    })?;
    trees.par_iter().try_for_each(|t| {
        for sign in [Sign::Plus, Sign::Minus] {
            let pq = close_rooted_pointed(t, sign).map_err(|e| err(&e))?;
            let (back, s) = open_rooted_pointed(&pq).map_err(|e| err(&e))?;
            ensure(s == sign && back.canonical_form() == t.canonical_form(), || {
                format!("n = {n}, g = {g}: open after close differs")
            })?;
        }
        Ok::<(), String>(())
    })?;
    // rooted version
    let rooted = enumerate_rooted_quadrangulations(n, g, b).map_err(|e| err(&e))?;
    let wl = enumerate_well_labeled_trees(n, g, b).map_err(|e| err(&e))?;
    let opened: BTreeSet<_> = rooted
        .par_iter()
        .map(|q| open_rooted(q).map(|t| t.canonical_form()))
        .collect::<Result<_, _>>()
        .map_err(|e| err(&e))?;
    let wl_set: BTreeSet<_> = wl.iter().map(|t| t.canonical_form()).collect();
    ensure(opened == wl_set && wl.len() == rooted.len(), || format!("n = {n}, g = {g}: rooted opening is not onto"))?;
    for t in &wl {
        let q = close_rooted(t).map_err(|e| err(&e))?;
        ensure(open_rooted(&q).map_err(|e| err(&e))?.canonical_form() == t.canonical_form(), || {
            format!("n = {n}, g = {g}: rooted roundtrip differs")
        })?;
    }
    // unrooted version with the parity refinement
    let pointed = enumerate_quadrangulations(n, g, QuadKind::Pointed, b).map_err(|e| err(&e))?;
    let unrooted = enumerate_unrooted_well_labeled_trees(n, g, b).map_err(|e| err(&e))?;
    let mut odd_q: Vec<usize> = Vec::new();
    let mut keys = BTreeSet::new();
    for pq in &pointed {
        let d = distance_labels(&pq.quad, pq.basepoint).map_err(|e| err(&e))?;
        odd_q.push(d.labels.iter().filter(|l| *l % 2 == 1).count());
        keys.insert(unrooted_labeled_key(&open(pq).map_err(|e| err(&e))?));
    }
    let mut odd_t: Vec<usize> = unrooted
        .iter()
        .map(|t| t.labels.iter().filter(|l| *l % 2 != 0).count())
        .collect();
    odd_q.sort_unstable();
    odd_t.sort_unstable();
    let unrooted_set: BTreeSet<_> = unrooted.into_iter().collect();
    ensure(keys == unrooted_set && odd_q == odd_t, || format!("n = {n}, g = {g}: unrooted correspondence fails"))?;
    Ok(format!("{}", quads.len()))
}

fn bijection_roundtrips() -> Outcome {
    let b = Budget::default();
    let mut parts = Vec::new();
    for (n, g) in [(1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (2, 1), (3, 1), (4, 1)] {
        parts.push(format!("({n},{g}):{}", roundtrip_case(n, g, &b)?));
    }
    Ok(format!("rooted pointed objects {}", parts.join(" ")))
}

/// `t^2 (1 + 3t) / (2 (1 - 3t)^2 (1 + t))`
pub fn torus_rhat_closed_form(order: usize) -> TruncatedSeries {
    let num = TruncatedSeries::from_ints(Var::T, order, &[0, 0, 1, 3]);
    let a = TruncatedSeries::from_ints(Var::T, order, &[1, -3]);
    let den = (&(&a * &a) * &TruncatedSeries::from_ints(Var::T, order, &[1, 1])).scale(&rat(2));
    num.div(&den).expect("unit constant term")
}

/// `(T - 1)^2 T / (3 (2 - T)^2 (2 + T))`
pub fn torus_q_closed_form(order: usize) -> TruncatedSeries {
    let t = series_t(order);
    let c = |k: i64| TruncatedSeries::constant(Var::Z, order, rat(k));
    let tm = &t - &c(1);
    let two_m = &c(2) - &t;
    let den = (&(&two_m * &two_m) * &(&c(2) + &t)).scale(&rat(3));
    (&(&tm * &tm) * &t).div(&den).expect("unit constant term")
}

fn torus_closed_forms() -> Outcome {
    let limits = SchemeLimits::default();
    let s = enumerate_schemes_with(1, &limits).map_err(|e| e.to_string())?;
    ensure(s.len() == 4, || format!("{} torus schemes", s.len()))?;
    let r = rhat_with(1, 30, &limits).map_err(|e| e.to_string())?;
    ensure(r == torus_rhat_closed_form(30), || "scheme sum differs from the closed form".into())?;
    let q = series_qg(1, 30).map_err(|e| e.to_string())?;
    ensure(q == torus_q_closed_form(30), || "Q_1 differs from the closed form".into())?;
    let b = Budget::default();
    for (n, want) in [(2, 1), (3, 20)] {
        let c = enumerate_rooted_quadrangulations(n, 1, &b).map_err(|e| e.to_string())?.len();
        ensure(*q.coeff(n) == rat(want) && c == want as usize, || format!("q_1,{n}: series {}, census {c}", q.coeff(n)))?;
    }
    Ok("4 schemes; R1 and Q1 exact to order 30; q_1,2 = 1, q_1,3 = 20".into())
}

fn constants() -> Outcome {
    let limits = SchemeLimits::default();
    let t1 = tau_with(1, &limits).map_err(|e| e.to_string())?;
    ensure(t1 == frac(2, 3), || format!("tau_1 = {t1}"))?;
    let c1 = asympt_constant(1).map_err(|e| e.to_string())?;
    ensure(c1.rational == frac(1, 24) && c1.pi_power == 0, || format!("c_1 = {c1}"))?;
    let eps2 = cubic_one_face_count(2);
    let dom = dominant_schemes_with(2, &limits).map_err(|e| e.to_string())?;
    ensure(eps2 == 105u32.into() && dom.len() == 720 * 105, || format!("{} dominant schemes, eps_2 = {eps2}", dom.len()))?;
    let t2 = tau_with(2, &limits).map_err(|e| e.to_string())?;
    let c2 = asympt_constant(2).map_err(|e| e.to_string())?;
    ensure(c2.rational == frac(7, 4320) && c2.pi_power == -1, || format!("c_2 = {c2}, tau_2 = {t2}"))?;
    Ok(format!("tau_1 = {t1}, c_1 = {c1}, |W_2| = {}, tau_2 = {t2}, c_2 = {c2}", dom.len()))
}

fn symmetry() -> Outcome {
    let limits = SchemeLimits::default();
    for g in 1..=2 {
        let r = rhat_exact_with(g, &limits).map_err(|e| e.to_string())?;
        ensure(u_symmetry_check(&r), || format!("genus {g} sum is not symmetric"))?;
    }
    Ok("genus 1 and 2 symmetric".into())
}

/// Uniformly random connected map with `n_edges` edges, by rejection.
pub fn random_map(n_edges: usize, rng: &mut impl Rng) -> RotationMap {
    let n = 2 * n_edges;
    loop {
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(rng);
        let root = rng.gen_range(0..n);
        if let Ok(m) = RotationMap::from_sigma(sigma, root) {
            return m;
        }
    }
}

fn structural() -> Outcome {
    let mut rng = rng_for(2024, 6);
    let mut ops = 0;
    while ops < 10_000 {
        let m = random_map(rng.gen_range(1..=8), &mut rng);
        let faces = m.faces();
        let f = rng.gen_range(0..faces.len());
        let c = m.corners_of_face(f);
        let c1 = *c.choose(&mut rng).unwrap();
        let c2 = *c.choose(&mut rng).unwrap();
        let (m2, a) = m.add_edge_in_face(c1, c2).map_err(|e| e.to_string())?;
        let g = m.genus().map_err(|e| e.to_string())?;
        ensure(
            m2.genus() == Ok(g) && m2.n_faces() == m.n_faces() + 1 && m2.n_edges() == m.n_edges() + 1,
            || "genus or counts changed by an edge insertion".into(),
        )?;
        let back = m2.delete_edges(&[a]).map_err(|e| e.to_string())?.map;
        ensure(back.genus() == Ok(g) && back.canonical_form() == m.canonical_form(), || {
            "deleting the inserted edge does not restore the map".into()
        })?;
        // a uniformly chosen deletable edge
        let d = rng.gen_range(0..m.n_darts());
        let faces = m.faces();
        let face_of = |x: usize| faces.cycles.iter().position(|c| c.contains(&x));
        if let Ok(s) = m.delete_edges(&[d]) {
            let (f1, f2) = (face_of(d), face_of(m.alpha(d)));
            let chi = s.map.euler_characteristic();
            ensure(chi == m.euler_characteristic() + if f1 == f2 { 2 } else { 0 }, || "deletion broke the Euler relation".into())?;
            if f1 != f2 {
                ensure(s.map.genus() == Ok(g) && s.map.n_faces() + 1 == m.n_faces(), || "deletion changed the genus".into())?;
            }
        }
        ensure(m.dual().dual().canonical_form() == m.canonical_form() && m.dual().genus() == Ok(g), || {
            "dual is not an involution".into()
        })?;
        let mut perm: Vec<usize> = (0..m.n_darts()).collect();
        perm.shuffle(&mut rng);
        ensure(m.relabel(&perm).map_err(|e| e.to_string())?.canonical_form() == m.canonical_form(), || {
            "canonical form depends on dart names".into()
        })?;
        ops += 4;
    }
    let mut shapes = 0;
    for g in 1..=2 {
        for s in scheme_shapes(g, &SchemeLimits::default()).map_err(|e| e.to_string())?.iter() {
            let excess: usize = s.vertex_degrees().iter().map(|d| d - 2).sum();
            let k = s.n_edges();
            ensure(excess == 4 * g - 2 && 2 * g <= k && k <= 6 * g - 3, || format!("scheme shape violates degree bounds: {s:?}"))?;
            shapes += 1;
        }
    }
    Ok(format!("{ops} randomized operations; {shapes} scheme shapes"))
}

fn sampler() -> Outcome {
    let samples = sample_many(1, 100_000, 77).map_err(|e| e.to_string())?;
    let mut counts: HashMap<_, u64> = HashMap::new();
    for s in &samples {
        *counts.entry(s.quad.canonical_form()).or_default() += 1;
    }
    ensure(counts.len() == 6, || format!("{} distinct objects", counts.len()))?;
    let c: Vec<u64> = counts.values().copied().collect();
    let (stat, p) = chi_square_uniform(&c);
    ensure(p > 1e-3, || format!("chi-square {stat:.2}, p = {p:.2e}"))?;
    for i in 0..200u64 {
        let n = 1 + (i as usize % 40);
        let s = sample_quadrangulation_with(n, 78, &mut rng_for(78, i)).map_err(|e| e.to_string())?;
        check_bipartite_quadrangulation(&s.quad.quad).map_err(|e| e.to_string())?;
        ensure(s.quad.quad.genus() == Ok(0), || "sample is not planar".into())?;
        let (t, sign) = open_rooted_pointed(&s.quad).map_err(|e| e.to_string())?;
        ensure(sign == s.sign && t.canonical_form() == s.tree.canonical_form(), || "sample does not reopen to its tree".into())?;
        let d = distance_labels(&s.quad.quad, s.quad.basepoint).map_err(|e| e.to_string())?;
        let mut dist: Vec<i64> = d.labels.into_iter().filter(|&x| x > 0).collect();
        let mut lab = normalize_min(&s.tree).labels;
        dist.sort_unstable();
        lab.sort_unstable();
        ensure(dist == lab, || "labels are not the distances".into())?;
    }
    let profiles: Vec<_> = (8..=12).map(|k| distance_profile(1 << k, 400, 79)).collect();
    let slope = log_log_slope(&profiles);
    ensure((0.15..=0.35).contains(&slope), || format!("slope {slope:.3}"))?;
    Ok(format!("chi-square {stat:.2} (p = {p:.3}); slope estimate {slope:.3}"))
}

fn trend() -> Outcome {
    let q = series_qg(1, 400).map_err(|e| e.to_string())?;
    let c = frac(1, 24);
    let d40 = deviation_from(q.coeff(40), 40, &c);
    let d400 = deviation_from(q.coeff(400), 400, &c);
    use num_traits::ToPrimitive;
    ensure(d400 < d40, || "deviation does not decrease".into())?;
    Ok(format!(
        "deviation {:.3e} at n = 40, {:.3e} at n = 400",
        d40.to_f64().unwrap_or(f64::NAN),
        d400.to_f64().unwrap_or(f64::NAN)
    ))
}
