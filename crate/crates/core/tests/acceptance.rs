//! Acceptance checks. Each check prints a single PASS/FAIL line on stderr,
//! bypassing output capture, and expected values come from oracles written
//! here rather than from the library.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::io::Write;
use std::time::Instant;

use gmaps::bijection::{close_rooted, close_rooted_pointed, open, open_rooted, open_rooted_pointed, Sign};
use gmaps::census::{
    enumerate_embedded_trees, enumerate_quadrangulations, enumerate_rooted_quadrangulations, enumerate_unrooted_well_labeled_trees,
    enumerate_well_labeled_trees, unrooted_labeled_key, Budget, QuadKind,
};
use gmaps::labeling::LabeledMap;
use gmaps::quad_map::check_bipartite_quadrangulation;
use gmaps::sampler::{distance_profile, log_log_slope, rng_for, sample_many, sample_quadrangulation_with};
use gmaps::schemes::{dominant_schemes, enumerate_schemes, scheme_shapes, SchemeLimits};
use gmaps::series::{asympt_constant, rhat, rhat_exact, series_q_bullet, series_qg, tau};
use gmaps::RotationMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

fn report(id: usize, name: &str, f: impl FnOnce() -> String + std::panic::UnwindSafe) {
    let start = Instant::now();
    let res = std::panic::catch_unwind(f);
    let secs = start.elapsed().as_secs_f64();
    let line = match &res {
        Ok(detail) => format!("criterion {id} PASS {name} ({secs:.2}s): {detail}\n"),
        Err(_) => format!("criterion {id} FAIL {name} ({secs:.2}s)\n"),
    };
    std::io::stderr().lock().write_all(line.as_bytes()).unwrap();
    if let Err(e) = res {
        std::panic::resume_unwind(e);
    }
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

// Truncated power series with exact coefficients, kept deliberately naive.
#[derive(Clone, Debug, PartialEq)]
struct Ser(Vec<BigRational>);

impl Ser {
    fn poly(n: usize, c: &[i64]) -> Ser {
        Ser((0..=n).map(|i| q(c.get(i).copied().unwrap_or(0), 1)).collect())
    }
    fn add(&self, o: &Ser) -> Ser {
        Ser(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    fn scale(&self, k: &BigRational) -> Ser {
        Ser(self.0.iter().map(|a| a * k).collect())
    }
    fn mul(&self, o: &Ser) -> Ser {
        let n = self.0.len();
        let mut r = vec![BigRational::zero(); n];
        for i in 0..n {
            if self.0[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                r[i + j] += &self.0[i] * &o.0[j];
            }
        }
        Ser(r)
    }
    fn inv(&self) -> Ser {
        let n = self.0.len();
        let mut r = vec![BigRational::zero(); n];
        r[0] = self.0[0].recip();
        for k in 1..n {
            let mut s = BigRational::zero();
            for j in 1..=k {
                s += &self.0[j] * &r[k - j];
            }
            r[k] = -s * &r[0];
        }
        Ser(r)
    }
}

/// `T = 1 + 3 z T^2`: coefficients `3^n Cat(n)`, from the product formula.
fn planar_t(n: usize) -> Ser {
    let mut c = vec![BigRational::one()];
    for k in 1..=n {
        let prev = c[k - 1].clone();
        c.push(prev * q(3 * 2 * (2 * k as i64 - 1), k as i64 + 1));
    }
    Ser(c)
}

fn planar_formula(n: usize) -> BigInt {
    // 2 * 3^n (2n)! / (n! (n+2)!), by the ratio of consecutive terms
    let mut a = q(1, 2);
    for k in 1..=n {
        let k = k as i64;
        a = a * q(3 * 2 * (2 * k - 1) * k, k * (k + 2));
    }
    (a * q(2, 1)).to_integer()
}

fn torus_q(n: usize) -> Ser {
    let t = planar_t(n);
    let one = Ser::poly(n, &[1]);
    let tm = t.add(&one.scale(&q(-1, 1)));
    let two_m = Ser::poly(n, &[2]).add(&t.scale(&q(-1, 1)));
    let two_p = Ser::poly(n, &[2]).add(&t);
    let den = two_m.mul(&two_m).mul(&two_p).scale(&q(3, 1));
    tm.mul(&tm).mul(&t).mul(&den.inv())
}

fn genus_by_euler(m: &RotationMap) -> usize {
    // cycles of sigma and of sigma∘alpha counted directly
    let n = m.n_darts();
    let cycles = |f: &dyn Fn(usize) -> usize| {
        let mut seen = vec![false; n];
        let mut c = 0;
        for d in 0..n {
            if !seen[d] {
                c += 1;
                let mut x = d;
                while !seen[x] {
                    seen[x] = true;
                    x = f(x);
                }
            }
        }
        c
    };
    let v = cycles(&|d| m.sigma(d));
    let f = cycles(&|d| m.sigma(m.alpha(d)));
    let chi = v as i64 - (n / 2) as i64 + f as i64;
    assert!(chi <= 2 && chi % 2 == 0);
    ((2 - chi) / 2) as usize
}

fn bfs_distances(m: &RotationMap, from: usize) -> Vec<i64> {
    let vertex_of = m.vertex_of();
    let mut dist = vec![-1; m.n_vertices()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for d in (0..m.n_darts()).filter(|&d| vertex_of[d] == v) {
            let w = vertex_of[m.alpha(d)];
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

#[test]
fn check_1_planar_counts() {
    report(1, "planar quadrangulation counts", || {
        let expected = [2, 9, 54];
        for n in 1..=3 {
            assert_eq!(planar_formula(n), BigInt::from(expected[n - 1]));
            let census = enumerate_rooted_quadrangulations(n, 0, &Budget::default()).unwrap();
            assert_eq!(census.len(), expected[n - 1]);
        }
        let qb = series_q_bullet(0, 30).unwrap();
        for n in 0..=30 {
            let want = BigRational::from_integer(planar_formula(n) * BigInt::from(n + 2));
            assert_eq!(*qb.coeff(n), want, "n = {n}");
        }
        "census 2, 9, 54; pointed series exact for n <= 30".into()
    });
}

fn roundtrip(n: usize, g: usize) -> usize {
    let b = Budget::default();
    let quads = enumerate_quadrangulations(n, g, QuadKind::RootedPointed, &b).unwrap();
    let trees = enumerate_embedded_trees(n, g, &b).unwrap();
    assert_eq!(quads.len(), 2 * trees.len(), "n = {n}, g = {g}");
    let distinct: BTreeSet<_> = quads.iter().map(|p| p.canonical_form()).collect();
    assert_eq!(distinct.len(), quads.len());
    for pq in &quads {
        let (t, s) = open_rooted_pointed(pq).unwrap();
        assert_eq!(genus_by_euler(&t.map), g);
        assert_eq!(t.map.n_faces(), 1);
        assert_eq!(close_rooted_pointed(&t, s).unwrap().canonical_form(), pq.canonical_form());
    }
    for t in &trees {
        for sign in [Sign::Plus, Sign::Minus] {
            let pq = close_rooted_pointed(t, sign).unwrap();
            assert_eq!(genus_by_euler(&pq.quad), g);
            let (back, s) = open_rooted_pointed(&pq).unwrap();
            assert_eq!(s, sign);
            assert_eq!(back.canonical_form(), t.canonical_form());
        }
    }
    // rooted quadrangulations against rooted well-labeled maps
    let rooted = enumerate_rooted_quadrangulations(n, g, &b).unwrap();
    let wl = enumerate_well_labeled_trees(n, g, &b).unwrap();
    assert_eq!(rooted.len(), wl.len());
    let opened: BTreeSet<_> = rooted.iter().map(|q| open_rooted(q).unwrap().canonical_form()).collect();
    let wl_set: BTreeSet<_> = wl.iter().map(LabeledMap::canonical_form).collect();
    assert_eq!(opened, wl_set);
    for t in &wl {
        assert_eq!(open_rooted(&close_rooted(t).unwrap()).unwrap().canonical_form(), t.canonical_form());
    }
    // unrooted pointed quadrangulations against unrooted labeled maps, with
    // vertices at odd distance matching odd labels
    let pointed = enumerate_quadrangulations(n, g, QuadKind::Pointed, &b).unwrap();
    let unrooted = enumerate_unrooted_well_labeled_trees(n, g, &b).unwrap();
    assert_eq!(pointed.len(), unrooted.len());
    let mut odd_dist = Vec::new();
    let mut keys = BTreeSet::new();
    for pq in &pointed {
        let d = bfs_distances(&pq.quad, pq.basepoint);
        odd_dist.push(d.iter().filter(|x| *x % 2 == 1).count());
        keys.insert(unrooted_labeled_key(&open(pq).unwrap()));
    }
    let mut odd_labels: Vec<usize> = unrooted.iter().map(|t| t.labels.iter().filter(|l| *l % 2 != 0).count()).collect();
    odd_dist.sort_unstable();
    odd_labels.sort_unstable();
    assert_eq!(odd_dist, odd_labels);
    assert_eq!(keys, unrooted.into_iter().collect::<BTreeSet<_>>());
    quads.len()
}

#[test]
fn check_2_bijection() {
    report(2, "bijection roundtrips", || {
        let mut sizes = Vec::new();
        for n in 1..=5 {
            sizes.push(roundtrip(n, 0));
        }
        for n in 2..=4 {
            sizes.push(roundtrip(n, 1));
        }
        // planar rooted pointed counts are 2 * 3^n * Cat(n)
        let t = planar_t(5);
        for n in 1..=5 {
            assert_eq!(BigInt::from(sizes[n - 1]), (t.0[n].clone() * q(2, 1)).to_integer());
        }
        format!("rooted pointed objects {sizes:?}")
    });
}

#[test]
fn check_3_torus() {
    report(3, "torus schemes and closed forms", || {
        assert_eq!(enumerate_schemes(1).unwrap().len(), 4);
        let order = 30;
        // t^2 (1 + 3t) / (2 (1 - 3t)^2 (1 + t))
        let a = Ser::poly(order, &[1, -3]);
        let den = a.mul(&a).mul(&Ser::poly(order, &[1, 1])).scale(&q(2, 1));
        let want = Ser::poly(order, &[0, 0, 1, 3]).mul(&den.inv());
        assert_eq!(rhat(1, order).unwrap().coeffs(), &want.0[..]);
        let qs = series_qg(1, order).unwrap();
        assert_eq!(qs.coeffs(), &torus_q(order).0[..]);
        for (n, count) in [(2, 1), (3, 20)] {
            assert_eq!(*qs.coeff(n), q(count, 1));
            assert_eq!(enumerate_rooted_quadrangulations(n, 1, &Budget::default()).unwrap().len(), count as usize);
        }
        "4 schemes; both closed forms exact to order 30; q(1,2) = 1, q(1,3) = 20".into()
    });
}

#[test]
fn check_4_constants() {
    report(4, "asymptotic constants", || {
        assert_eq!(tau(1).unwrap(), q(2, 3));
        let c1 = asympt_constant(1).unwrap();
        assert_eq!((c1.rational, c1.pi_power), (q(1, 24), 0));
        // one-face cubic maps of genus 2: 2 (6g-3)! / (12^g g! (3g-2)!)
        let fact = |n: i64| (1..=n).product::<i64>();
        let eps2 = 2 * fact(9) / (144 * fact(2) * fact(4));
        assert_eq!(eps2, 105);
        assert_eq!(dominant_schemes(2).unwrap().len() as i64, fact(6) * eps2);
        // c_2 = tau_2 / (2^15 Gamma(7/2) / sqrt(pi)) with Gamma(7/2) = 15/8 sqrt(pi)
        let c2 = asympt_constant(2).unwrap();
        assert_eq!((c2.rational.clone(), c2.pi_power), (q(7, 4320), -1));
        let tau2 = tau(2).unwrap();
        assert_eq!(tau2, q(7, 4320) * q(32768 * 15, 8));
        assert_eq!(tau2, q(896, 9));
        format!("tau_1 = 2/3, c_1 = 1/24, 75600 dominant schemes, tau_2 = {tau2}, c_2 = {c2}")
    });
}

#[test]
fn check_5_symmetry() {
    report(5, "U to 1/U symmetry", || {
        for g in 1..=2 {
            let r = rhat_exact(g).unwrap();
            for (a, b) in [(2, 1), (3, 1), (5, 7), (1, 4), (11, 3)] {
                let x = q(a, b);
                assert_eq!(r.eval(&x), r.eval(&x.recip()), "genus {g} at {x}");
            }
        }
        "genus 1 and 2 agree at U and 1/U".into()
    });
}

#[test]
fn check_6_structure() {
    report(6, "structural invariants", || {
        let mut rng = rng_for(99, 0);
        let mut surgeries = 0;
        while surgeries < 10_000 {
            let n_edges = rng.gen_range(1..=7);
            let mut sigma: Vec<usize> = (0..2 * n_edges).collect();
            sigma.shuffle(&mut rng);
            let Ok(m) = RotationMap::from_sigma(sigma, 0) else { continue };
            let g = genus_by_euler(&m);
            let faces = m.faces();
            let corners = m.corners_of_face(rng.gen_range(0..faces.len()));
            let (c1, c2) = (*corners.choose(&mut rng).unwrap(), *corners.choose(&mut rng).unwrap());
            let (m2, added) = m.add_edge_in_face(c1, c2).unwrap();
            assert_eq!(genus_by_euler(&m2), g);
            assert_eq!(m2.n_faces(), m.n_faces() + 1);
            let back = m2.delete_edges(&[added]).unwrap().map;
            assert_eq!(back.canonical_form(), m.canonical_form());
            surgeries += 1;
            let d = rng.gen_range(0..m.n_darts());
            if let Ok(s) = m.delete_edges(&[d]) {
                let g2 = genus_by_euler(&s.map);
                assert!(g2 == g || g2 + 1 == g);
                surgeries += 1;
            }
            // duality and canonical forms
            let dual = m.dual();
            assert_eq!(genus_by_euler(&dual), g);
            assert_eq!((dual.n_vertices(), dual.n_faces()), (m.n_faces(), m.n_vertices()));
            assert_eq!(dual.dual().canonical_form(), m.canonical_form());
            let mut perm: Vec<usize> = (0..m.n_darts()).collect();
            perm.shuffle(&mut rng);
            let renamed = m.relabel(&perm).unwrap();
            assert_eq!(renamed.canonical_form(), m.canonical_form());
            assert_eq!(renamed.canonical_form().canonical_form(), m.canonical_form());
        }
        let limits = SchemeLimits::default();
        let mut shapes = 0;
        for g in 1..=2 {
            for s in scheme_shapes(g, &limits).unwrap().iter() {
                let deg = s.vertex_degrees();
                assert!(deg.iter().all(|&d| d >= 3));
                assert_eq!(deg.iter().map(|d| d - 2).sum::<usize>(), 4 * g - 2);
                let k = s.n_edges();
                assert!(2 * g <= k && k <= 6 * g - 3);
                assert_eq!((s.n_faces(), genus_by_euler(s)), (1, g));
                shapes += 1;
            }
        }
        format!("{surgeries} surgeries; {shapes} scheme shapes")
    });
}

#[test]
fn check_7_sampler() {
    report(7, "uniform sampler", || {
        let samples = sample_many(1, 100_000, 2024).unwrap();
        let mut counts: HashMap<_, f64> = HashMap::new();
        for s in &samples {
            *counts.entry(s.quad.canonical_form()).or_default() += 1.0;
        }
        // 6 = 2 * 3 rooted pointed quadrangulations with one face
        assert_eq!(counts.len(), 6);
        let e = samples.len() as f64 / 6.0;
        let stat: f64 = counts.values().map(|c| (c - e) * (c - e) / e).sum();
        // upper 0.1% point of chi-square with 5 degrees of freedom
        assert!(stat < 20.515, "chi-square {stat}");
        for i in 0..300 {
            let n = 1 + i as usize % 50;
            let s = sample_quadrangulation_with(n, 5, &mut rng_for(5, i)).unwrap();
            let quad = &s.quad.quad;
            check_bipartite_quadrangulation(quad).unwrap();
            assert_eq!((quad.n_faces(), genus_by_euler(quad)), (n, 0));
            let (t, sign) = open_rooted_pointed(&s.quad).unwrap();
            assert_eq!(sign, s.sign);
            assert_eq!(t.canonical_form(), s.tree.canonical_form());
            let mut dist: Vec<i64> = bfs_distances(quad, s.quad.basepoint).into_iter().filter(|&d| d > 0).collect();
            let low = s.tree.labels.iter().min().unwrap();
            let mut labels: Vec<i64> = s.tree.labels.iter().map(|l| l - low + 1).collect();
            dist.sort_unstable();
            labels.sort_unstable();
            assert_eq!(dist, labels);
        }
        let profiles: Vec<_> = (8..=12).map(|k| distance_profile(1 << k, 400, 31)).collect();
        let slope = log_log_slope(&profiles);
        assert!((0.15..=0.35).contains(&slope), "slope {slope}");
        format!("chi-square {stat:.2}; slope {slope:.3}")
    });
}

#[test]
fn check_8_trend() {
    report(8, "asymptotic trend", || {
        let order = 400;
        let ours = torus_q(order);
        let lib = series_qg(1, order).unwrap();
        assert_eq!(lib.coeff(40), &ours.0[40]);
        assert_eq!(lib.coeff(400), &ours.0[400]);
        let dev = |n: usize| {
            let twelve_n = BigRational::from_integer(BigInt::from(12).pow(n as u32));
            (&ours.0[n] / twelve_n - q(1, 24)).abs().to_f64().unwrap()
        };
        let (d40, d400) = (dev(40), dev(400));
        assert!(d400 < d40, "{d40} {d400}");
        format!("|q/12^n - 1/24| = {d40:.3e} at n = 40, {d400:.3e} at n = 400")
    });
}
