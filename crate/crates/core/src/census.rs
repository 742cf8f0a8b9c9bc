//! Exhaustive generation of small rooted maps, labeled one-face maps and
//! bipartite quadrangulations.
//!
//! Rooted maps have no nontrivial automorphism, so every rooted map has a
//! unique canonical numbering (see [`RotationMap::canonical_form`]). The
//! generator builds `sigma` dart by dart in the order of that numbering:
//! when dart `d` is processed, `sigma(d)` is either a dart already numbered
//! and not yet used as an image, or the next fresh dart. Each rooted map is
//! produced exactly once and no deduplication is needed.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::labeling::LabeledMap;
use crate::map_core::{standard_alpha, RotationMap};
use crate::quad_map::{bipartition, PointedQuad};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("size {n} at genus {g} exceeds the census budget (max {max}); raise it with {env}")]
    Budget {
        n: usize,
        g: usize,
        max: usize,
        env: &'static str,
    },
    #[error("n must be at least 1")]
    Empty,
}

pub const BUDGET_ENV: &str = "GMAPS_CENSUS_MAX_N";

/// Largest size allowed per genus: entry `g` bounds the number of edges of
/// maps and trees, and the number of faces of quadrangulations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub max_n: Vec<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_n: vec![5, 4, 3],
        }
    }
}

impl Budget {
    /// Default budget, overridden by a comma separated list in
    /// `GMAPS_CENSUS_MAX_N` (e.g. `6,5,3`).
    pub fn from_env() -> Self {
        match std::env::var(BUDGET_ENV) {
            Ok(s) => Self::parse(&s).unwrap_or_default(),
            Err(_) => Self::default(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let max_n: Option<Vec<usize>> = s.split(',').map(|x| x.trim().parse().ok()).collect();
        max_n.filter(|v| !v.is_empty()).map(|max_n| Budget { max_n })
    }

    pub fn check(&self, n: usize, g: usize) -> Result<(), CensusError> {
        if n == 0 {
            return Err(CensusError::Empty);
        }
        let max = self.max_n.get(g).copied().unwrap_or(0);
        if n > max {
            return Err(CensusError::Budget {
                n,
                g,
                max,
                env: BUDGET_ENV,
            });
        }
        Ok(())
    }
}

struct Generator {
    n_darts: usize,
    degree: Option<usize>,
    sigma: Vec<usize>,
    inv: Vec<usize>,
    next: usize,
}

const UNSET: usize = usize::MAX;

impl Generator {
    fn new(n_edges: usize, degree: Option<usize>) -> Self {
        let n_darts = 2 * n_edges;
        Generator {
            n_darts,
            degree,
            sigma: vec![UNSET; n_darts],
            inv: vec![UNSET; n_darts],
            next: 2,
        }
    }

    /// Candidate images for `sigma(d)`, in increasing order.
    fn candidates(&self, d: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.next).filter(|&x| self.inv[x] == UNSET).collect();
        if self.next < self.n_darts {
            out.push(self.next);
        }
        out.retain(|&x| self.degree_ok(d, x));
        out
    }

    /// Whether setting `sigma(d) = x` keeps every vertex cycle of the
    /// prescribed length.
    fn degree_ok(&self, d: usize, x: usize) -> bool {
        let Some(k) = self.degree else { return true };
        // length of the chain ending at d, walking backwards
        let mut back = 1;
        let mut y = d;
        while self.inv[y] != UNSET {
            y = self.inv[y];
            back += 1;
        }
        if y == x {
            return back == k;
        }
        let mut fwd = 1;
        let mut z = x;
        while z < self.n_darts && self.sigma[z] != UNSET {
            z = self.sigma[z];
            fwd += 1;
        }
        back + fwd <= k
    }

    fn assign(&mut self, d: usize, x: usize) -> bool {
        self.sigma[d] = x;
        self.inv[x] = d;
        if x == self.next {
            self.next += 2;
            true
        } else {
            false
        }
    }

    fn unassign(&mut self, d: usize, x: usize, fresh: bool) {
        self.sigma[d] = UNSET;
        self.inv[x] = UNSET;
        if fresh {
            self.next -= 2;
        }
    }

    fn run(&mut self, d: usize, out: &mut impl FnMut(&[usize])) {
        if d == self.n_darts {
            out(&self.sigma);
            return;
        }
        if d >= self.next {
            return;
        }
        for x in self.candidates(d) {
            let fresh = self.assign(d, x);
            self.run(d + 1, out);
            self.unassign(d, x, fresh);
        }
    }

    /// All assignments of the first `depth` darts.
    fn prefixes(&mut self, d: usize, depth: usize, out: &mut Vec<Vec<(usize, usize)>>, acc: &mut Vec<(usize, usize)>) {
        if d == depth || d == self.n_darts {
            out.push(acc.clone());
            return;
        }
        if d >= self.next {
            return;
        }
        for x in self.candidates(d) {
            let fresh = self.assign(d, x);
            acc.push((d, x));
            self.prefixes(d + 1, depth, out, acc);
            acc.pop();
            self.unassign(d, x, fresh);
        }
    }
}

/// Calls `f` on every rooted map with `n_edges` edges (all genera), with
/// optional prescribed vertex degree, in parallel over search branches.
/// Results are returned in generation order.
fn generate<T, F>(n_edges: usize, degree: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(RotationMap) -> Option<T> + Sync,
{
    let mut root_gen = Generator::new(n_edges, degree);
    let mut prefixes = Vec::new();
    root_gen.prefixes(0, 4.min(2 * n_edges), &mut prefixes, &mut Vec::new());
    let n_darts = 2 * n_edges;
    let chunks: Vec<Vec<T>> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut gen = Generator::new(n_edges, degree);
            for &(d, x) in prefix {
                gen.assign(d, x);
            }
            let mut found = Vec::new();
            let start = prefix.len();
            gen.run(start, &mut |sigma: &[usize]| {
                let m = RotationMap::from_parts_trusted(sigma.to_vec(), standard_alpha(n_darts), 0);
                if let Some(t) = f(m) {
                    found.push(t);
                }
            });
            found
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Number of rooted maps with `n_edges` edges for each genus.
pub fn rooted_map_counts_by_genus(n_edges: usize) -> Vec<usize> {
    let genera = generate(n_edges, None, |m| Some(m.genus().unwrap()));
    let mut counts = vec![0; genera.iter().max().map_or(0, |g| g + 1)];
    for g in genera {
        counts[g] += 1;
    }
    counts
}

/// All rooted maps of genus `g` with `n` edges, in canonical form.
pub fn enumerate_rooted_maps(n: usize, g: usize, budget: &Budget) -> Result<Vec<RotationMap>, CensusError> {
    budget.check(n, g)?;
    Ok(generate(n, None, |m| (m.genus().unwrap() == g).then_some(m)))
}

/// Rooted maps of genus `g` with `n` vertices, all of degree 4.
pub fn enumerate_quartic_maps(n: usize, g: usize) -> Vec<RotationMap> {
    generate(2 * n, Some(4), |m| (m.genus().unwrap() == g).then_some(m))
}

/// Rooted one-face maps of genus `g` with `n` edges.
pub fn enumerate_g_trees(n: usize, g: usize, budget: &Budget) -> Result<Vec<RotationMap>, CensusError> {
    budget.check(n, g)?;
    Ok(generate(n, None, |m| {
        (m.n_faces() == 1 && m.genus().unwrap() == g).then_some(m)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    /// root label 1 and minimum label 1
    WellLabeled,
    /// root label 1
    Embedded,
    /// minimum label 1
    AlmostWellLabeled,
}

/// All labelings of `m` with variations in {-1, 0, 1} normalized by `kind`.
pub fn labelings(m: &RotationMap, kind: LabelKind) -> Vec<LabeledMap> {
    let vertices = m.vertices();
    let nv = vertices.len();
    let root_v = vertices.of[m.root()];
    // BFS spanning tree: parent of each non-root vertex in discovery order
    let mut order = vec![root_v];
    let mut parent = vec![usize::MAX; nv];
    let mut seen = vec![false; nv];
    seen[root_v] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &d in &vertices.cycles[v] {
            let w = vertices.of[m.alpha(d)];
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                order.push(w);
            }
        }
        i += 1;
    }
    let edges: Vec<(usize, usize)> = (0..m.n_darts())
        .filter(|&d| d < m.alpha(d))
        .map(|d| (vertices.of[d], vertices.of[m.alpha(d)]))
        .collect();
    let mut out = Vec::new();
    let mut labels = vec![0i64; nv];
    let total = 3usize.pow((nv - 1) as u32);
    for code in 0..total {
        let mut c = code;
        for &v in &order[1..] {
            labels[v] = labels[parent[v]] + (c % 3) as i64 - 1;
            c /= 3;
        }
        if edges.iter().any(|&(a, b)| (labels[a] - labels[b]).abs() > 1) {
            continue;
        }
        let min = *labels.iter().min().unwrap();
        let shifted: Vec<i64> = match kind {
            LabelKind::WellLabeled if min != 0 => continue,
            LabelKind::WellLabeled | LabelKind::Embedded => labels.iter().map(|l| l + 1).collect(),
            LabelKind::AlmostWellLabeled => labels.iter().map(|l| l + 1 - min).collect(),
        };
        out.push(LabeledMap {
            map: m.clone(),
            labels: shifted,
        });
    }
    out
}

fn labeled_trees(n: usize, g: usize, kind: LabelKind, budget: &Budget) -> Result<Vec<LabeledMap>, CensusError> {
    let trees = enumerate_g_trees(n, g, budget)?;
    Ok(trees.par_iter().flat_map_iter(|t| labelings(t, kind)).collect())
}

pub fn enumerate_well_labeled_trees(n: usize, g: usize, budget: &Budget) -> Result<Vec<LabeledMap>, CensusError> {
    labeled_trees(n, g, LabelKind::WellLabeled, budget)
}

pub fn enumerate_embedded_trees(n: usize, g: usize, budget: &Budget) -> Result<Vec<LabeledMap>, CensusError> {
    labeled_trees(n, g, LabelKind::Embedded, budget)
}

pub fn enumerate_almost_well_labeled_trees(
    n: usize,
    g: usize,
    budget: &Budget,
) -> Result<Vec<LabeledMap>, CensusError> {
    labeled_trees(n, g, LabelKind::AlmostWellLabeled, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadKind {
    /// unrooted, with a marked vertex
    Pointed,
    /// rooted; the basepoint is the root vertex
    Rooted,
    /// rooted with an independent marked vertex
    RootedPointed,
}

/// Rooted bipartite quadrangulations with `n` faces and genus `g`,
/// obtained as duals of rooted 4-regular maps.
pub fn enumerate_rooted_quadrangulations(n: usize, g: usize, budget: &Budget) -> Result<Vec<RotationMap>, CensusError> {
    budget.check(n, g)?;
    let mut quads: Vec<RotationMap> = enumerate_quartic_maps(n, g)
        .into_par_iter()
        .map(|m| m.dual())
        .filter(|q| bipartition(q).is_ok())
        .map(|q| q.canonical_form())
        .collect();
    quads.sort();
    Ok(quads)
}

pub fn enumerate_quadrangulations(
    n: usize,
    g: usize,
    kind: QuadKind,
    budget: &Budget,
) -> Result<Vec<PointedQuad>, CensusError> {
    let rooted = enumerate_rooted_quadrangulations(n, g, budget)?;
    Ok(match kind {
        QuadKind::Rooted => rooted
            .into_iter()
            .map(|q| {
                let v0 = q.vertex_of()[q.root()];
                PointedQuad { quad: q, basepoint: v0 }
            })
            .collect(),
        QuadKind::RootedPointed => rooted
            .into_iter()
            .flat_map(|q| {
                (0..q.n_vertices()).map(move |v| PointedQuad {
                    quad: q.clone(),
                    basepoint: v,
                })
            })
            .collect(),
        QuadKind::Pointed => {
            let keys: BTreeSet<(RotationMap, usize)> = rooted
                .par_iter()
                .flat_map_iter(|q| {
                    (0..q.n_vertices()).map(move |v| {
                        PointedQuad {
                            quad: q.clone(),
                            basepoint: v,
                        }
                        .unrooted_key()
                    })
                })
                .collect();
            keys.into_iter()
                .map(|(quad, basepoint)| PointedQuad { quad, basepoint })
                .collect()
        }
    })
}

/// Isomorphism key of a labeled map forgetting its root: the least
/// canonical form over all rootings.
pub fn unrooted_labeled_key(t: &LabeledMap) -> LabeledMap {
    (0..t.map.n_darts())
        .map(|r| t.with_root(r).canonical_form())
        .min()
        .expect("maps have darts")
}

/// Unrooted well-labeled g-trees with `n` edges.
pub fn enumerate_unrooted_well_labeled_trees(
    n: usize,
    g: usize,
    budget: &Budget,
) -> Result<Vec<LabeledMap>, CensusError> {
    let rooted = enumerate_almost_well_labeled_trees(n, g, budget)?;
    let keys: BTreeSet<LabeledMap> = rooted.par_iter().map(unrooted_labeled_key).collect();
    Ok(keys.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn totals_over_all_genera() {
        let totals: Vec<usize> = (1..=4).map(|n| rooted_map_counts_by_genus(n).iter().sum()).collect();
        assert_eq!(totals, vec![2, 10, 74, 706]);
    }

    #[test]
    fn planar_and_torus_counts() {
        let planar: Vec<usize> = (1..=3).map(|n| enumerate_rooted_maps(n, 0, &b()).unwrap().len()).collect();
        assert_eq!(planar, vec![2, 9, 54]);
        assert_eq!(enumerate_rooted_maps(2, 1, &b()).unwrap().len(), 1);
        assert_eq!(enumerate_rooted_maps(3, 1, &b()).unwrap().len(), 20);
    }

    #[test]
    fn generated_maps_are_canonical_and_distinct() {
        let maps = enumerate_rooted_maps(3, 0, &b()).unwrap();
        let set: BTreeSet<_> = maps.iter().cloned().collect();
        assert_eq!(set.len(), maps.len());
        assert!(maps.iter().all(RotationMap::is_canonical));
    }

    #[test]
    fn plane_trees_are_catalan() {
        let counts: Vec<usize> = (1..=3).map(|n| enumerate_g_trees(n, 0, &b()).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 5]);
    }

    #[test]
    fn labeled_tree_counts() {
        assert_eq!(enumerate_embedded_trees(1, 0, &b()).unwrap().len(), 3);
        assert_eq!(enumerate_embedded_trees(2, 0, &b()).unwrap().len(), 18);
        assert_eq!(enumerate_well_labeled_trees(1, 0, &b()).unwrap().len(), 2);
    }

    #[test]
    fn quadrangulation_counts() {
        assert_eq!(enumerate_quadrangulations(2, 0, QuadKind::Rooted, &b()).unwrap().len(), 9);
        assert_eq!(enumerate_quadrangulations(1, 0, QuadKind::RootedPointed, &b()).unwrap().len(), 6);
        assert_eq!(enumerate_quadrangulations(2, 1, QuadKind::Rooted, &b()).unwrap().len(), 1);
    }

    #[test]
    fn budget_guard() {
        let err = enumerate_rooted_maps(9, 0, &b()).unwrap_err();
        assert!(matches!(err, CensusError::Budget { .. }));
        assert_eq!(Budget::parse("6, 4,2").unwrap().max_n, vec![6, 4, 2]);
        assert!(Budget::parse("x").is_none());
    }
}
