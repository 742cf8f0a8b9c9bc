//! Uniform random rooted pointed planar quadrangulations, obtained by
//! closing uniform embedded plane trees.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bijection::{close_rooted_pointed, BijectionError, Sign};
use crate::census::{enumerate_quadrangulations, Budget, CensusError, QuadKind};
use crate::labeling::LabeledMap;
use crate::map_core::RotationMap;
use crate::quad_map::PointedQuad;

/// Generator for sample number `index` of a run seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform rooted plane tree with `n` edges. A uniform arrangement of `n`
/// up steps and `n + 1` down steps has exactly one cyclic shift whose
/// partial sums stay nonnegative before the last step; dropping that step
/// leaves a uniform Dyck path, read as the contour of the tree.
pub fn random_plane_tree(n: usize, rng: &mut impl Rng) -> RotationMap {
    assert!(n >= 1, "trees need at least one edge");
    let mut steps: Vec<i32> = std::iter::repeat_n(1, n).chain(std::iter::repeat_n(-1, n + 1)).collect();
    steps.shuffle(rng);
    // the shift starts right after the first minimum of the partial sums
    let mut h = 0;
    let mut low = 0;
    let mut at = 0;
    for (i, s) in steps.iter().enumerate() {
        h += s;
        if h < low {
            low = h;
            at = i + 1;
        }
    }
    let len = steps.len();
    steps.rotate_left(at % len);
    debug_assert_eq!(steps.last(), Some(&-1));
    let dyck = &steps[..2 * n];
    // contour darts: step j is dart j, matched up and down steps form an edge
    let mut alpha = vec![0; 2 * n];
    let mut stack = Vec::new();
    for (j, &s) in dyck.iter().enumerate() {
        if s == 1 {
            stack.push(j);
        } else {
            let i = stack.pop().expect("Dyck path");
            alpha[i] = j;
            alpha[j] = i;
        }
    }
    let sigma = (0..2 * n).map(|d| (alpha[d] + 1) % (2 * n)).collect();
    RotationMap::new(sigma, alpha, 0).expect("contour gives a tree")
}

/// Uniform random embedded tree: a uniform plane tree with independent
/// uniform variations in {-1, 0, 1} along its edges and root label 1.
pub fn sample_embedded_tree(n: usize, seed: u64) -> LabeledMap {
    embedded_tree_with(n, &mut rng_for(seed, 0))
}

pub fn embedded_tree_with(n: usize, rng: &mut impl Rng) -> LabeledMap {
    let map = random_plane_tree(n, rng);
    let vertex_of = map.vertex_of();
    let mut labels = vec![None; map.n_vertices()];
    labels[vertex_of[map.root()]] = Some(1i64);
    // darts are in contour order, so each parent is labeled before its children
    for d in 0..map.n_darts() {
        let (a, b) = (vertex_of[d], vertex_of[map.alpha(d)]);
        if labels[b].is_none() {
            let base = labels[a].expect("contour order visits parents first");
            labels[b] = Some(base + rng.gen_range(-1..=1));
        }
    }
    LabeledMap {
        map,
        labels: labels.into_iter().map(|l| l.unwrap()).collect(),
    }
}

/// A sampled quadrangulation with the tree and sign it was built from.
#[derive(Debug, Clone)]
pub struct QuadSample {
    pub quad: PointedQuad,
    pub tree: LabeledMap,
    pub sign: Sign,
    pub seed: u64,
}

/// Uniform rooted pointed planar bipartite quadrangulation with `n` faces.
pub fn sample_quadrangulation(n: usize, seed: u64) -> Result<QuadSample, BijectionError> {
    sample_quadrangulation_with(n, seed, &mut rng_for(seed, 0))
}

pub fn sample_quadrangulation_with(n: usize, seed: u64, rng: &mut impl Rng) -> Result<QuadSample, BijectionError> {
    let tree = embedded_tree_with(n, rng);
    let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
    let quad = close_rooted_pointed(&tree, sign)?;
    Ok(QuadSample { quad, tree, sign, seed })
}

/// `count` independent samples; sample `i` uses stream `i` of `seed`.
pub fn sample_many(n: usize, count: usize, seed: u64) -> Result<Vec<QuadSample>, BijectionError> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_quadrangulation_with(n, seed, &mut rng_for(seed, i)))
        .collect()
}

/// Uniform rooted pointed quadrangulation of genus `g` drawn from the
/// exhaustive list; only available within the census budget.
pub fn sample_from_census(n: usize, g: usize, seed: u64, budget: &Budget) -> Result<PointedQuad, CensusError> {
    let all = enumerate_quadrangulations(n, g, QuadKind::RootedPointed, budget)?;
    all.choose(&mut rng_for(seed, 0)).cloned().ok_or(CensusError::Empty)
}

/// Radius statistics of random quadrangulations with `n` faces. The
/// distances from the basepoint are the tree labels shifted to minimum 1,
/// so trees suffice.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    pub n: usize,
    pub samples: usize,
    /// estimate of the expected largest distance from the basepoint
    pub mean_max: f64,
    /// estimate of the expected distance of a uniform vertex
    pub mean_distance: f64,
    pub max_max: i64,
}

pub fn distance_profile(n: usize, samples: usize, seed: u64) -> DistanceProfile {
    let per: Vec<(i64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let t = embedded_tree_with(n, &mut rng_for(seed, i));
            let low = t.min_label();
            let radius = t.max_label() - low + 1;
            let mean = t.labels.iter().map(|l| (l - low + 1) as f64).sum::<f64>() / t.labels.len() as f64;
            (radius, mean)
        })
        .collect();
    let s = samples.max(1) as f64;
    DistanceProfile {
        n,
        samples,
        mean_max: per.iter().map(|p| p.0 as f64).sum::<f64>() / s,
        mean_distance: per.iter().map(|p| p.1).sum::<f64>() / s,
        max_max: per.iter().map(|p| p.0).max().unwrap_or(0),
    }
}

/// Least-squares slope of `log mean_max` against `log n`.
pub fn log_log_slope(profiles: &[DistanceProfile]) -> f64 {
    let pts: Vec<(f64, f64)> = profiles.iter().map(|p| ((p.n as f64).ln(), p.mean_max.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Pearson chi-square statistic against the uniform distribution, and its
/// upper tail probability.
pub fn chi_square_uniform(counts: &[u64]) -> (f64, f64) {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let total: u64 = counts.iter().sum();
    let k = counts.len() as f64;
    let e = total as f64 / k;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    let dist = ChiSquared::new(k - 1.0).expect("at least two classes");
    (stat, 1.0 - dist.cdf(stat))
}
