//! Reduced g-trees, scheme decompositions with Motzkin walks, and the
//! exhaustive list of rooted standard schemes of small genus.
//!
//! A reduced tree is a one-face map without vertices of degree one; a g-tree
//! is recovered from it by attaching a plane tree at each of its corners.
//! Contracting the maximal paths of degree-two vertices of a reduced tree
//! gives its scheme, and the label variations along each path form a
//! Motzkin walk.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use thiserror::Error;

use crate::labeling::{relabel_nu, LabelError, LabeledMap};
use crate::map_core::{MapError, RotationMap};

/// Environment override for the largest genus accepted by scheme
/// enumeration.
pub const MAX_GENUS_ENV: &str = "GMAPS_SCHEME_MAX_GENUS";
pub const DEFAULT_MAX_GENUS: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("genus 0 maps have no reduced core")]
    Genus0,
    #[error("expected a one-face map, found {faces} faces")]
    NotOneFace { faces: usize },
    #[error("scheme enumeration for genus {g} exceeds the limit {max} (set {MAX_GENUS_ENV} to raise it)")]
    Guard { g: usize, max: usize },
    #[error("expected {expected} attachments, found {found}")]
    AttachmentCount { expected: usize, found: usize },
    #[error("attachment {index}: {reason}")]
    BadAttachment { index: usize, reason: &'static str },
    #[error("scheme shape must be in canonical form")]
    NotCanonical,
    #[error("scheme is invalid: {0}")]
    BadScheme(&'static str),
    #[error("expected {expected} walks, found {found}")]
    WalkCount { expected: usize, found: usize },
    #[error("walk of edge {edge} is empty")]
    EmptyWalk { edge: usize },
    #[error("walk of edge {edge} has a step outside -1..=1")]
    BadStep { edge: usize },
    #[error("label values must be {expected} strictly increasing positive integers")]
    BadValues { expected: usize },
    #[error("root offset {offset} exceeds the length {len} of the root walk")]
    BadOffset { offset: usize, len: usize },
    #[error("walk of edge {edge} has increment {found}, expected {expected}")]
    IncrementMismatch { edge: usize, expected: i64, found: i64 },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Label(#[from] LabelError),
}

/// Limits for scheme enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeLimits {
    pub max_genus: usize,
}

impl Default for SchemeLimits {
    fn default() -> Self {
        SchemeLimits {
            max_genus: DEFAULT_MAX_GENUS,
        }
    }
}

impl SchemeLimits {
    pub fn from_env() -> Self {
        std::env::var(MAX_GENUS_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(|max_genus| SchemeLimits { max_genus })
            .unwrap_or_default()
    }

    pub fn check(&self, g: usize) -> Result<(), SchemeError> {
        if g == 0 {
            return Err(SchemeError::Genus0);
        }
        if g > self.max_genus {
            return Err(SchemeError::Guard {
                g,
                max: self.max_genus,
            });
        }
        Ok(())
    }
}

/// Plane tree attached at a corner of a reduced tree. `tree` is `None` for
/// the trivial one-vertex tree; otherwise its root vertex is the corner
/// vertex and its root label is 1. `secondary_root` marks the dart carrying
/// the root of the whole g-tree, which can only happen in the first
/// attachment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Attachment {
    pub tree: Option<LabeledMap>,
    pub secondary_root: Option<usize>,
}

/// A reduced g-tree with root label 1 and the attachments at its corners,
/// listed clockwise starting with the corner on the right of the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedTree {
    pub tree: LabeledMap,
    pub attachments: Vec<Attachment>,
}

/// Corner darts of a one-face map in clockwise order, starting with the
/// corner on the right of the root. Corner `c` sits between `c` and `sigma(c)`.
pub fn corner_order(m: &RotationMap) -> Vec<usize> {
    let inv = m.sigma_inverse();
    let n = m.n_darts();
    let mut out = Vec::with_capacity(n);
    let mut x = m.root();
    for _ in 0..n {
        out.push(inv[x]);
        x = m.phi(x);
    }
    out
}

fn one_face_genus(m: &RotationMap) -> Result<usize, SchemeError> {
    let faces = m.n_faces();
    if faces != 1 {
        return Err(SchemeError::NotOneFace { faces });
    }
    let g = m.genus()?;
    if g == 0 {
        return Err(SchemeError::Genus0);
    }
    Ok(g)
}

fn labeled_from_dart_labels(map: RotationMap, dart_labels: &[i64]) -> LabeledMap {
    let labels = map.vertices().cycles.iter().map(|c| dart_labels[c[0]]).collect();
    LabeledMap { map, labels }
}

/// Peels vertices of degree one until none is left, then records the plane
/// trees hanging in each corner of the core.
pub fn reduce(t: &LabeledMap) -> Result<ReducedTree, SchemeError> {
    let m = &t.map;
    one_face_genus(m)?;
    let n = m.n_darts();
    let vertices = m.vertices();
    let vertex_of = &vertices.of;
    let dl = t.dart_labels();

    let mut alive_deg: Vec<usize> = vertices.cycles.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<usize> = (0..vertices.len()).filter(|&v| alive_deg[v] == 1).collect();
    while let Some(v) = queue.pop_front() {
        if alive_deg[v] != 1 {
            continue;
        }
        let d = *vertices.cycles[v].iter().find(|&&d| !removed[d]).unwrap();
        let e = m.alpha(d);
        removed[d] = true;
        removed[e] = true;
        alive_deg[v] = 0;
        let w = vertex_of[e];
        alive_deg[w] -= 1;
        if alive_deg[w] == 1 {
            queue.push_back(w);
        }
    }

    let core_sigma = |d: usize| {
        let mut s = m.sigma(d);
        while removed[s] {
            s = m.sigma(s);
        }
        s
    };

    // pendant darts of each core corner, with the corner holding the root
    let mut pendant: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut root_corner = None;
    for c in (0..n).filter(|&d| !removed[d]) {
        let mut here = Vec::new();
        let mut s = m.sigma(c);
        while removed[s] {
            here.push(s);
            s = m.sigma(s);
        }
        if here.is_empty() {
            continue;
        }
        // every dart of the hanging trees, corner darts first
        let mut all = here.clone();
        let mut seen: std::collections::HashSet<usize> = here.iter().copied().collect();
        let mut i = 0;
        while i < all.len() {
            let y = m.alpha(all[i]);
            i += 1;
            if seen.contains(&y) {
                continue;
            }
            for &z in &vertices.cycles[vertex_of[y]] {
                if seen.insert(z) {
                    all.push(z);
                }
            }
        }
        if all.contains(&m.root()) {
            root_corner = Some(c);
        }
        pendant.insert(c, all);
    }

    let surgery = m.remove_darts(&removed)?;
    let old_to_new = &surgery.old_to_new;
    let mut new_to_old = vec![0; surgery.map.n_darts()];
    for (old, new) in old_to_new.iter().enumerate() {
        if let Some(nw) = new {
            new_to_old[*nw] = old;
        }
    }
    let core_root_old = match root_corner {
        None => m.root(),
        Some(c) => core_sigma(c),
    };
    let core_map = surgery.map.with_root(old_to_new[core_root_old].unwrap());
    let core_dl: Vec<i64> = new_to_old.iter().map(|&o| dl[o]).collect();
    let core = relabel_nu(&labeled_from_dart_labels(core_map, &core_dl));

    let mut attachments = Vec::with_capacity(core.map.n_darts());
    for c_new in corner_order(&core.map) {
        let c = new_to_old[c_new];
        let Some(darts) = pendant.get(&c) else {
            attachments.push(Attachment::default());
            continue;
        };
        let mut local = HashMap::new();
        for (i, &d) in darts.iter().enumerate() {
            local.insert(d, i);
        }
        let k = darts.len();
        let at_corner: Vec<usize> = {
            let mut v = Vec::new();
            let mut s = m.sigma(c);
            while removed[s] {
                v.push(s);
                s = m.sigma(s);
            }
            v
        };
        let mut sigma = vec![0; k];
        let mut alpha = vec![0; k];
        for (i, &d) in darts.iter().enumerate() {
            alpha[i] = local[&m.alpha(d)];
            sigma[i] = match at_corner.iter().position(|&x| x == d) {
                Some(j) => local[&at_corner[(j + 1) % at_corner.len()]],
                None => local[&m.sigma(d)],
            };
        }
        let map = RotationMap::new(sigma, alpha, 0)?;
        let base = dl[c];
        let local_dl: Vec<i64> = darts.iter().map(|&d| dl[d] - base + 1).collect();
        let tree = labeled_from_dart_labels(map, &local_dl);
        let secondary_root = (root_corner == Some(c)).then(|| local[&m.root()]);
        attachments.push(Attachment {
            tree: Some(tree),
            secondary_root,
        });
    }
    Ok(ReducedTree {
        tree: core,
        attachments,
    })
}

/// Attaches the corner trees back onto the core; inverse of [`reduce`].
/// The result has root label 1.
pub fn graft(r: &ReducedTree) -> Result<LabeledMap, SchemeError> {
    let core = &r.tree.map;
    let n = core.n_darts();
    if core.n_faces() != 1 {
        return Err(SchemeError::NotOneFace {
            faces: core.n_faces(),
        });
    }
    if r.attachments.len() != n {
        return Err(SchemeError::AttachmentCount {
            expected: n,
            found: r.attachments.len(),
        });
    }
    for (i, a) in r.attachments.iter().enumerate() {
        match (&a.tree, a.secondary_root) {
            (None, Some(_)) => {
                return Err(SchemeError::BadAttachment {
                    index: i,
                    reason: "trivial tree cannot hold the root",
                })
            }
            (Some(_), Some(_)) if i > 0 => {
                return Err(SchemeError::BadAttachment {
                    index: i,
                    reason: "only the first attachment may hold the root",
                })
            }
            (Some(t), Some(s)) if s >= t.map.n_darts() => {
                return Err(SchemeError::BadAttachment {
                    index: i,
                    reason: "secondary root out of range",
                })
            }
            (Some(t), _) if t.map.n_faces() != 1 || t.map.genus()? != 0 => {
                return Err(SchemeError::BadAttachment {
                    index: i,
                    reason: "not a plane tree",
                })
            }
            _ => {}
        }
    }
    let core_dl = r.tree.dart_labels();
    let total: usize = n + r
        .attachments
        .iter()
        .map(|a| a.tree.as_ref().map_or(0, |t| t.map.n_darts()))
        .sum::<usize>();
    let mut sigma: Vec<usize> = (0..total).collect();
    let mut alpha: Vec<usize> = (0..total).collect();
    let mut dl = vec![0i64; total];
    for d in 0..n {
        sigma[d] = core.sigma(d);
        alpha[d] = core.alpha(d);
        dl[d] = core_dl[d];
    }
    let mut offset = n;
    let mut root = core.root();
    for (j, c) in corner_order(core).into_iter().enumerate() {
        let a = &r.attachments[j];
        let Some(t) = &a.tree else { continue };
        let tm = &t.map;
        let tdl = t.dart_labels();
        let shift = core_dl[c] - tdl[tm.root()];
        for x in 0..tm.n_darts() {
            sigma[offset + x] = offset + tm.sigma(x);
            alpha[offset + x] = offset + tm.alpha(x);
            dl[offset + x] = tdl[x] + shift;
        }
        // splice the root vertex of the attachment into the corner
        let a0 = tm.root();
        let mut last = a0;
        while tm.sigma(last) != a0 {
            last = tm.sigma(last);
        }
        let after = core.sigma(c);
        sigma[c] = offset + a0;
        sigma[offset + last] = after;
        if let Some(s) = a.secondary_root {
            root = offset + s;
        }
        offset += tm.n_darts();
    }
    let map = RotationMap::new(sigma, alpha, root)?;
    Ok(relabel_nu(&labeled_from_dart_labels(map, &dl)))
}

/// Rooted one-face map with all degrees at least 3 and vertex labels onto
/// `0..=p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scheme {
    pub shape: Arc<RotationMap>,
    pub labels: Vec<i64>,
}

impl Scheme {
    pub fn genus(&self) -> usize {
        self.shape.genus().unwrap_or(0)
    }

    pub fn n_edges(&self) -> usize {
        self.shape.n_edges()
    }

    pub fn max_label(&self) -> i64 {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    pub fn as_labeled_map(&self) -> LabeledMap {
        LabeledMap {
            map: (*self.shape).clone(),
            labels: self.labels.clone(),
        }
    }

    /// Checks the degree and labeling conditions.
    pub fn validate(&self) -> Result<(), SchemeError> {
        one_face_genus(&self.shape)?;
        if self.shape.vertex_degrees().iter().any(|&d| d < 3) {
            return Err(SchemeError::BadScheme("vertex of degree below 3"));
        }
        if self.labels.len() != self.shape.n_vertices() {
            return Err(SchemeError::BadScheme("one label per vertex expected"));
        }
        if !is_surjective_onto_prefix(&self.labels) {
            return Err(SchemeError::BadScheme("labels must cover 0..=p"));
        }
        Ok(())
    }
}

fn is_surjective_onto_prefix(labels: &[i64]) -> bool {
    let max = labels.iter().copied().max().unwrap_or(0);
    if labels.iter().any(|&l| l < 0) {
        return false;
    }
    let mut hit = vec![false; max as usize + 1];
    for &l in labels {
        hit[l as usize] = true;
    }
    hit.into_iter().all(|h| h)
}

/// A walk with steps in {-1, 0, +1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MotzkinWalk {
    pub steps: Vec<i8>,
}

impl MotzkinWalk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn increment(&self) -> i64 {
        self.steps.iter().map(|&s| s as i64).sum()
    }
}

/// A reduced tree cut into its scheme, one walk per scheme edge and the
/// label values of the scheme vertices. Edge `i` of the (canonical) shape
/// consists of darts `2i` and `2i + 1`; its walk is read from the origin of
/// dart `2i`. Scheme label `j > 0` stands for `values[j - 1]`, label 0 for 0.
/// `root_offset` is the position of the root along the walk of edge 0, so
/// roots on degree-two vertices are recorded as well.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SchemeDecomposition {
    pub scheme: Scheme,
    pub walks: Vec<MotzkinWalk>,
    pub values: Vec<i64>,
    pub root_offset: usize,
}

/// Contracts the maximal paths of degree-two vertices of the core.
pub fn extract_scheme(r: &ReducedTree) -> Result<SchemeDecomposition, SchemeError> {
    let m = &r.tree.map;
    one_face_genus(m)?;
    let n = m.n_darts();
    let vertex_of = m.vertex_of();
    let deg = m.vertex_degrees();
    let dl = r.tree.dart_labels();
    if deg.iter().any(|&d| d < 2) {
        return Err(SchemeError::BadScheme("core has a vertex of degree 1"));
    }
    let branch: Vec<usize> = (0..n).filter(|&d| deg[vertex_of[d]] >= 3).collect();
    let mut local = vec![usize::MAX; n];
    for (i, &b) in branch.iter().enumerate() {
        local[b] = i;
    }
    // path of each branch dart, and the position of every dart on a path
    let mut paths: Vec<Vec<usize>> = Vec::with_capacity(branch.len());
    let mut ends = Vec::with_capacity(branch.len());
    let mut on_path = vec![(usize::MAX, 0); n];
    for (i, &b) in branch.iter().enumerate() {
        let mut steps = Vec::new();
        let mut x = b;
        loop {
            on_path[x] = (i, steps.len());
            steps.push(x);
            let y = m.alpha(x);
            if deg[vertex_of[y]] >= 3 {
                ends.push(local[y]);
                break;
            }
            x = m.sigma(y);
        }
        paths.push(steps);
    }
    let (root_path, root_offset) = on_path[m.root()];
    let sigma: Vec<usize> = branch.iter().map(|&b| local[m.sigma(b)]).collect();
    let shape0 = RotationMap::new(sigma, ends, root_path)?;
    let perm = shape0.canonical_relabeling();
    let shape = shape0.relabel(&perm)?;
    let mut inv = vec![0; perm.len()];
    for (d, &p) in perm.iter().enumerate() {
        inv[p] = d;
    }

    let mut distinct: Vec<i64> = branch.iter().map(|&b| dl[b]).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let low = distinct[0];
    let labels = shape
        .vertices()
        .cycles
        .iter()
        .map(|c| distinct.binary_search(&dl[branch[inv[c[0]]]]).unwrap() as i64)
        .collect();
    let values = distinct[1..].iter().map(|l| l - low).collect();

    let walks = (0..shape.n_edges())
        .map(|i| {
            let path = &paths[inv[2 * i]];
            MotzkinWalk {
                steps: path.iter().map(|&x| (dl[m.alpha(x)] - dl[x]) as i8).collect(),
            }
        })
        .collect();
    Ok(SchemeDecomposition {
        scheme: Scheme {
            shape: Arc::new(shape),
            labels,
        },
        walks,
        values,
        root_offset,
    })
}

/// Substitutes a path for each scheme edge; inverse of [`extract_scheme`].
/// The returned reduced tree has root label 1 and only trivial attachments.
pub fn rebuild(d: &SchemeDecomposition) -> Result<ReducedTree, SchemeError> {
    let s = &d.scheme;
    s.validate()?;
    let shape = &*s.shape;
    if !shape.is_canonical() {
        return Err(SchemeError::NotCanonical);
    }
    let k = shape.n_edges();
    if d.walks.len() != k {
        return Err(SchemeError::WalkCount {
            expected: k,
            found: d.walks.len(),
        });
    }
    let p = s.max_label() as usize;
    if d.values.len() != p || d.values.first().is_some_and(|&v| v <= 0) || d.values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SchemeError::BadValues { expected: p });
    }
    for (edge, w) in d.walks.iter().enumerate() {
        if w.is_empty() {
            return Err(SchemeError::EmptyWalk { edge });
        }
        if w.steps.iter().any(|s| !(-1..=1).contains(s)) {
            return Err(SchemeError::BadStep { edge });
        }
    }
    if d.root_offset >= d.walks[0].len() {
        return Err(SchemeError::BadOffset {
            offset: d.root_offset,
            len: d.walks[0].len(),
        });
    }
    let value = |l: i64| if l == 0 { 0 } else { d.values[l as usize - 1] };
    let vertex_of = shape.vertex_of();
    let sv = |x: usize| value(s.labels[vertex_of[x]]);
    for (edge, w) in d.walks.iter().enumerate() {
        let expected = sv(2 * edge + 1) - sv(2 * edge);
        if w.increment() != expected {
            return Err(SchemeError::IncrementMismatch {
                edge,
                expected,
                found: w.increment(),
            });
        }
    }

    let mut base = Vec::with_capacity(k);
    let mut total = 0;
    for w in &d.walks {
        base.push(total);
        total += 2 * w.len();
    }
    // scheme dart -> dart of the rebuilt tree
    let image = |x: usize| {
        let e = x / 2;
        if x % 2 == 0 {
            base[e]
        } else {
            base[e] + 2 * d.walks[e].len() - 1
        }
    };
    let mut sigma = vec![0; total];
    let mut dl = vec![0i64; total];
    for (e, w) in d.walks.iter().enumerate() {
        let b = base[e];
        let mut level = sv(2 * e);
        for (j, &st) in w.steps.iter().enumerate() {
            dl[b + 2 * j] = level;
            level += st as i64;
            dl[b + 2 * j + 1] = level;
            if j + 1 < w.len() {
                sigma[b + 2 * j + 1] = b + 2 * j + 2;
                sigma[b + 2 * j + 2] = b + 2 * j + 1;
            }
        }
    }
    for x in 0..shape.n_darts() {
        sigma[image(x)] = image(shape.sigma(x));
    }
    let map = RotationMap::new(
        sigma,
        crate::map_core::standard_alpha(total),
        base[0] + 2 * d.root_offset,
    )?;
    let tree = relabel_nu(&labeled_from_dart_labels(map, &dl));
    let attachments = vec![Attachment::default(); total];
    Ok(ReducedTree { tree, attachments })
}

/// Edge and label statistics of a scheme that determine its weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    /// edges
    pub k: usize,
    /// largest label
    pub p: usize,
    /// edges with equal endpoint labels
    pub e_eq: usize,
    /// edges with distinct endpoint labels
    pub e_neq: usize,
    /// `d[j - 1]` counts edges whose lower label is below `j` and upper
    /// label at least `j`, for `j = 1..=p`
    pub d: Vec<usize>,
    /// sum of `d`
    pub d_total: usize,
}

pub fn d_profile(s: &Scheme) -> Profile {
    profile_of(&s.shape, &s.labels)
}

fn profile_of(shape: &RotationMap, labels: &[i64]) -> Profile {
    let vertex_of = shape.vertex_of();
    let p = labels.iter().copied().max().unwrap_or(0) as usize;
    let mut d = vec![0; p];
    let (mut e_eq, mut e_neq) = (0, 0);
    for x in (0..shape.n_darts()).filter(|&x| x < shape.alpha(x)) {
        let a = labels[vertex_of[x]];
        let b = labels[vertex_of[shape.alpha(x)]];
        if a == b {
            e_eq += 1;
        } else {
            e_neq += 1;
        }
        for j in a.min(b) + 1..=a.max(b) {
            d[j as usize - 1] += 1;
        }
    }
    let d_total = d.iter().sum();
    Profile {
        k: shape.n_edges(),
        p,
        e_eq,
        e_neq,
        d,
        d_total,
    }
}

/// Rooted one-face maps of genus `g` with all vertex degrees at least 3,
/// in canonical form and sorted. One-face maps are chord diagrams on their
/// face: numbering darts along the face from the root, `phi` is `d -> d + 1`
/// and the map is determined by the pairing `alpha`.
pub fn scheme_shapes(g: usize, limits: &SchemeLimits) -> Result<Arc<Vec<RotationMap>>, SchemeError> {
    limits.check(g)?;
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<RotationMap>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&g) {
        return Ok(v.clone());
    }
    let mut all = Vec::new();
    for k in 2 * g..=6 * g - 3 {
        let n = 2 * k;
        let want_vertices = k + 1 - 2 * g;
        let firsts: Vec<usize> = (2..n - 1).collect();
        let found: Vec<Vec<RotationMap>> = firsts
            .into_par_iter()
            .map(|j| {
                let mut alpha = vec![usize::MAX; n];
                alpha[0] = j;
                alpha[j] = 0;
                let mut out = Vec::new();
                chord_search(&mut alpha, 1, want_vertices, &mut out);
                out
            })
            .collect();
        all.extend(found.into_iter().flatten());
    }
    let before = all.len();
    all.par_sort_unstable();
    all.dedup();
    debug_assert_eq!(before, all.len(), "chord diagrams give distinct rooted maps");
    let all = Arc::new(all);
    cache.lock().unwrap().insert(g, all.clone());
    Ok(all)
}

fn chord_search(alpha: &mut [usize], from: usize, want_vertices: usize, out: &mut Vec<RotationMap>) {
    let n = alpha.len();
    let Some(i) = (from..n).find(|&i| alpha[i] == usize::MAX) else {
        if let Some(m) = chord_map(alpha, want_vertices) {
            out.push(m);
        }
        return;
    };
    for j in i + 2..n {
        if alpha[j] != usize::MAX || (i == 0 && j == n - 1) {
            continue;
        }
        // (i, j) next to an already placed (i - 1, j + 1) or (i + 1, j - 1)
        // would close a vertex of degree 2
        let prev = alpha[(i + n - 1) % n];
        if prev == (j + 1) % n {
            continue;
        }
        alpha[i] = j;
        alpha[j] = i;
        chord_search(alpha, i + 1, want_vertices, out);
        alpha[i] = usize::MAX;
        alpha[j] = usize::MAX;
    }
}

fn chord_map(alpha: &[usize], want_vertices: usize) -> Option<RotationMap> {
    let n = alpha.len();
    let sigma: Vec<usize> = (0..n).map(|d| (alpha[d] + 1) % n).collect();
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        cycles += 1;
        if cycles > want_vertices {
            return None;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = sigma[x];
        }
        if len < 3 {
            return None;
        }
    }
    if cycles != want_vertices {
        return None;
    }
    Some(RotationMap::new(sigma, alpha.to_vec(), 0).ok()?.canonical_form())
}

/// Calls `f` with every labeling of `q` vertices onto some `0..=p`, in
/// lexicographic order.
pub fn for_each_surjective_labeling(q: usize, mut f: impl FnMut(&[i64])) {
    let mut labels = vec![0i64; q];
    loop {
        if is_surjective_onto_prefix(&labels) {
            f(&labels);
        }
        // odometer over 0..q
        let mut i = q;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if labels[i] + 1 < q as i64 {
                labels[i] += 1;
                for l in &mut labels[i + 1..] {
                    *l = 0;
                }
                break;
            }
        }
    }
}

/// All rooted standard schemes of genus `g`, sorted by shape then labels.
pub fn enumerate_schemes(g: usize) -> Result<Vec<Scheme>, SchemeError> {
    enumerate_schemes_with(g, &SchemeLimits::from_env())
}

pub fn enumerate_schemes_with(g: usize, limits: &SchemeLimits) -> Result<Vec<Scheme>, SchemeError> {
    let shapes = scheme_shapes(g, limits)?;
    let mut out = Vec::new();
    for shape in shapes.iter() {
        let shape = Arc::new(shape.clone());
        for_each_surjective_labeling(shape.n_vertices(), |l| {
            out.push(Scheme {
                shape: shape.clone(),
                labels: l.to_vec(),
            })
        });
    }
    Ok(out)
}

/// Schemes with `4g - 2` vertices, all of degree 3, labeled by distinct
/// integers.
pub fn dominant_schemes(g: usize) -> Result<Vec<Scheme>, SchemeError> {
    dominant_schemes_with(g, &SchemeLimits::from_env())
}

pub fn dominant_schemes_with(g: usize, limits: &SchemeLimits) -> Result<Vec<Scheme>, SchemeError> {
    let shapes = scheme_shapes(g, limits)?;
    let q = 4 * g - 2;
    let mut out = Vec::new();
    for shape in shapes.iter().filter(|s| s.n_vertices() == q) {
        let shape = Arc::new(shape.clone());
        for perm in permutations(q) {
            out.push(Scheme {
                shape: shape.clone(),
                labels: perm,
            })
        }
    }
    Ok(out)
}

fn permutations(q: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur: Vec<i64> = (0..q as i64).collect();
    heap_permutations(q, &mut cur, &mut out);
    out.sort_unstable();
    out
}

fn heap_permutations(k: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(k - 1, cur, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
    heap_permutations(k - 1, cur, out);
}

/// Number of schemes of genus `g` with each profile, without materializing
/// the schemes.
pub fn profile_multiplicities(g: usize, limits: &SchemeLimits) -> Result<Vec<(Profile, u64)>, SchemeError> {
    let shapes = scheme_shapes(g, limits)?;
    let merged = shapes
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<Profile, u64>, shape| {
            for_each_surjective_labeling(shape.n_vertices(), |l| {
                *acc.entry(profile_of(shape, l)).or_default() += 1;
            });
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let mut out: Vec<(Profile, u64)> = merged.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Number of rooted one-face cubic maps of genus `g`:
/// `2 (6g - 3)! / (12^g g! (3g - 2)!)`.
pub fn cubic_one_face_count(g: usize) -> num_bigint::BigUint {
    use num_bigint::BigUint;
    let fact = |n: usize| (1..=n).fold(BigUint::from(1u32), |a, i| a * BigUint::from(i));
    let num = BigUint::from(2u32) * fact(6 * g - 3);
    let den = BigUint::from(12u32).pow(g as u32) * fact(g) * fact(3 * g - 2);
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{enumerate_embedded_trees, Budget};
    use crate::labeling::is_embedded;
    use crate::map_core::examples::*;

    fn limits() -> SchemeLimits {
        SchemeLimits::default()
    }

    fn labeled(m: RotationMap, labels: Vec<i64>) -> LabeledMap {
        LabeledMap::new(m, labels).unwrap()
    }

    /// Figure-eight with each loop split into a path of `len` edges; all
    /// labels 1.
    fn subdivided_figure_eight(len: usize) -> LabeledMap {
        let core = labeled(figure_eight_torus(), vec![0]);
        let sh = extract_scheme(&ReducedTree {
            attachments: vec![Attachment::default(); 4],
            tree: core,
        })
        .unwrap();
        let d = SchemeDecomposition {
            walks: vec![
                MotzkinWalk {
                    steps: vec![0; len]
                };
                2
            ],
            ..sh
        };
        rebuild(&d).unwrap().tree
    }

    #[test]
    fn torus_shapes() {
        let shapes = scheme_shapes(1, &limits()).unwrap();
        assert_eq!(shapes.len(), 2);
        let mut counts: Vec<(usize, usize)> = shapes.iter().map(|s| (s.n_vertices(), s.n_edges())).collect();
        counts.sort();
        assert_eq!(counts, vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn four_torus_schemes() {
        let s = enumerate_schemes_with(1, &limits()).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(dominant_schemes_with(1, &limits()).unwrap().len(), 2);
        for x in &s {
            x.validate().unwrap();
        }
    }

    #[test]
    fn torus_profiles() {
        let s1 = Scheme {
            shape: Arc::new(figure_eight_torus().canonical_form()),
            labels: vec![0],
        };
        let p = d_profile(&s1);
        assert_eq!((p.k, p.p, p.e_eq, p.d_total), (2, 0, 2, 0));
        let theta = scheme_shapes(1, &limits())
            .unwrap()
            .iter()
            .find(|s| s.n_vertices() == 2)
            .unwrap()
            .clone();
        let p = d_profile(&Scheme {
            shape: Arc::new(theta.clone()),
            labels: vec![0, 1],
        });
        assert_eq!((p.k, p.p, p.e_eq, p.d.clone(), p.d_total), (3, 1, 0, vec![3], 3));
        let p = d_profile(&Scheme {
            shape: Arc::new(theta),
            labels: vec![0, 0],
        });
        assert_eq!((p.k, p.p, p.e_eq), (3, 0, 3));
    }

    #[test]
    fn genus_two_shape_degrees() {
        let shapes = scheme_shapes(2, &limits()).unwrap();
        for s in shapes.iter() {
            let k = s.n_edges();
            assert!((4..=9).contains(&k));
            let excess: usize = s.vertex_degrees().iter().map(|d| d - 2).sum();
            assert_eq!(excess, 6);
            assert_eq!(s.genus().unwrap(), 2);
        }
        let cubic = shapes.iter().filter(|s| s.n_vertices() == 6).count();
        assert_eq!(cubic, 105);
        assert_eq!(shapes.iter().filter(|s| s.n_vertices() == 1).count(), 21);
    }

    #[test]
    fn cubic_count_formula() {
        assert_eq!(cubic_one_face_count(1), 1u32.into());
        assert_eq!(cubic_one_face_count(2), 105u32.into());
        assert_eq!(cubic_one_face_count(3), 50050u32.into());
    }

    #[test]
    fn guard_on_large_genus() {
        assert!(matches!(enumerate_schemes_with(3, &limits()), Err(SchemeError::Guard { .. })));
        assert!(matches!(enumerate_schemes_with(0, &limits()), Err(SchemeError::Genus0)));
    }

    #[test]
    fn surjective_labelings_are_fubini_numbers() {
        for (q, want) in [(1, 1), (2, 3), (3, 13), (4, 75)] {
            let mut c = 0;
            for_each_surjective_labeling(q, |_| c += 1);
            assert_eq!(c, want);
        }
    }

    #[test]
    fn reduce_pendant_edge_on_figure_eight() {
        // figure-eight with an extra edge in one corner; root on the core
        let fe = figure_eight_torus();
        // pendant vertex in the corner of dart 0
        let mut sigma: Vec<usize> = fe.sigma_slice().to_vec();
        let after = sigma[0];
        sigma[0] = 4;
        sigma.push(after);
        sigma.push(5);
        let m = RotationMap::from_sigma(sigma, 0).unwrap();
        assert_eq!((m.n_faces(), m.genus().unwrap()), (1, 1));
        let t = labeled(m.clone(), vec![1, 2]);
        assert!(is_embedded(&t));
        let r = reduce(&t).unwrap();
        assert_eq!(r.tree.map.canonical_form(), fe.canonical_form());
        assert_eq!(r.attachments.len(), 4);
        assert_eq!(r.attachments.iter().filter(|a| a.tree.is_some()).count(), 1);
        assert_eq!(graft(&r).unwrap().canonical_form(), t.canonical_form());
        // root on the pendant edge
        for root in [4, 5] {
            let t2 = relabel_nu(&t.with_root(root));
            let r = reduce(&t2).unwrap();
            assert!(r.attachments[0].secondary_root.is_some());
            assert_eq!(graft(&r).unwrap().canonical_form(), t2.canonical_form());
        }
    }

    #[test]
    fn reduced_tree_reduces_to_itself() {
        let t = labeled(figure_eight_torus(), vec![1]);
        let r = reduce(&t).unwrap();
        assert!(r.attachments.iter().all(|a| a.tree.is_none()));
        assert_eq!(r.tree, t);
    }

    #[test]
    fn reduce_rejects_planar_trees() {
        let t = labeled(single_edge(), vec![1, 1]);
        assert_eq!(reduce(&t), Err(SchemeError::Genus0));
    }

    #[test]
    fn figure_eight_scheme() {
        let t = labeled(figure_eight_torus(), vec![1]);
        let d = extract_scheme(&reduce(&t).unwrap()).unwrap();
        assert_eq!(d.scheme.labels, vec![0]);
        assert_eq!(d.walks, vec![MotzkinWalk { steps: vec![0] }; 2]);
        let sub = subdivided_figure_eight(2);
        assert_eq!(sub.map.n_vertices(), 3);
        let d = extract_scheme(&reduce(&sub).unwrap()).unwrap();
        assert_eq!(d.scheme.shape.n_vertices(), 1);
        assert_eq!(d.walks, vec![MotzkinWalk { steps: vec![0, 0] }; 2]);
        assert_eq!(rebuild(&d).unwrap().tree.canonical_form(), sub.canonical_form());
    }

    #[test]
    fn theta_scheme_walks() {
        let theta = scheme_shapes(1, &limits())
            .unwrap()
            .iter()
            .find(|s| s.n_vertices() == 2)
            .unwrap()
            .clone();
        let vo = theta.vertex_of();
        let mut labels = vec![0; 2];
        labels[vo[theta.root()]] = 1;
        labels[1 - vo[theta.root()]] = 2;
        let t = labeled(theta, labels);
        let d = extract_scheme(&reduce(&t).unwrap()).unwrap();
        assert_eq!(d.scheme.max_label(), 1);
        assert_eq!(d.values, vec![1]);
        assert!(d.walks.iter().all(|w| w.increment().abs() == 1));
        assert_eq!(rebuild(&d).unwrap().tree.canonical_form(), t.canonical_form());
    }

    #[test]
    fn wrong_increment_is_rejected() {
        let sub = subdivided_figure_eight(1);
        let mut d = extract_scheme(&reduce(&sub).unwrap()).unwrap();
        d.walks[1] = MotzkinWalk { steps: vec![1] };
        assert!(matches!(
            rebuild(&d),
            Err(SchemeError::IncrementMismatch { edge: 1, .. })
        ));
    }

    #[test]
    fn census_roundtrips_on_the_torus() {
        for n in 2..=4 {
            let trees = enumerate_embedded_trees(n, 1, &Budget::default()).unwrap();
            for t in &trees {
                let r = reduce(t).unwrap();
                assert_eq!(r.attachments.len(), r.tree.map.n_darts());
                assert_eq!(graft(&r).unwrap().canonical_form(), t.canonical_form());
                let d = extract_scheme(&r).unwrap();
                d.scheme.validate().unwrap();
                assert_eq!(rebuild(&d).unwrap().tree.canonical_form(), r.tree.canonical_form());
            }
        }
    }

    #[test]
    fn torus_profiles_aggregate() {
        let p = profile_multiplicities(1, &limits()).unwrap();
        let total: u64 = p.iter().map(|x| x.1).sum();
        assert_eq!(total, 4);
    }
}
