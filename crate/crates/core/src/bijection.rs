//! Opening and closure: the bijection between pointed bipartite
//! quadrangulations of genus g with n faces and well-labeled one-face maps
//! of genus g with n edges, together with its rooted and rooted-pointed
//! versions.
//!
//! Opening: label the vertices by their distance to the basepoint. In each
//! face, the two corners whose label exceeds the label of the previous
//! corner (clockwise) are joined by a new edge; the old edges and the
//! basepoint are then removed.
//!
//! Closure: a new vertex of label 0 is joined to every corner of label 1,
//! every other corner is joined to the first corner of smaller label met
//! clockwise around its face, and the tree edges are removed.

use thiserror::Error;

use crate::labeling::{is_almost_well_labeled, is_embedded, normalize_min, relabel_nu, LabelError, LabeledMap};
use crate::map_core::{Corner, MapError, RotationMap};
use crate::quad_map::{check_bipartite_quadrangulation, PointedQuad, QuadError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("vertex {vertex} does not exist")]
    NoSuchVertex { vertex: usize },
    #[error("expected a one-face map, found {faces} faces")]
    NotOneFace { faces: usize },
    #[error("labels are not {expected}")]
    BadLabels { expected: &'static str },
    #[error("corner {corner} has no predecessor in its face")]
    NoPredecessor { corner: usize },
    #[error("dual orientation check failed: {0}")]
    Witness(String),
    #[error("face {face} of the quadrangulation has {found} increasing corners")]
    FaceRule { face: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(s: i64) -> Option<Sign> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Output of the opening: a rooted one-face map labeled by distances (its
/// minimum label is 1) and the orientation of the original root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpeningResult {
    pub tree: LabeledMap,
    pub sign: Sign,
}

/// Labels of the origins of all darts.
fn dart_labels_of(t: &LabeledMap) -> Vec<i64> {
    t.dart_labels()
}

/// Checks that each face of `q1` has exactly one increasing old dart on
/// its border and that following these dual edges gives a unique cycle,
/// made of the faces on the right of the darts leaving `v0_dart`'s vertex.
fn check_dual_orientation(
    q1: &RotationMap,
    n_old: usize,
    dl: &[i64],
    v0_darts: &[usize],
) -> Result<(), BijectionError> {
    let faces = q1.faces();
    let nf = faces.len();
    let mut out = vec![usize::MAX; nf];
    for d in 0..n_old {
        if dl[q1.alpha(d)] == dl[d] + 1 {
            let f = faces.of[d];
            if out[f] != usize::MAX {
                return Err(BijectionError::Witness(format!("face {f} has two outgoing dual edges")));
            }
            out[f] = faces.of[q1.alpha(d)];
        }
    }
    if let Some(f) = out.iter().position(|&o| o == usize::MAX) {
        return Err(BijectionError::Witness(format!("face {f} has no outgoing dual edge")));
    }
    // functional graph: collect cycles
    let mut state = vec![0u8; nf];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for s in 0..nf {
        let mut path = Vec::new();
        let mut f = s;
        while state[f] == 0 {
            state[f] = 1;
            path.push(f);
            f = out[f];
        }
        if state[f] == 1 {
            let pos = path.iter().position(|&x| x == f).unwrap();
            cycles.push(path[pos..].to_vec());
        }
        for p in path {
            state[p] = 2;
        }
    }
    if cycles.len() != 1 {
        return Err(BijectionError::Witness(format!("{} oriented cycles", cycles.len())));
    }
    let mut cyc = cycles.pop().unwrap();
    let mut expected: Vec<usize> = v0_darts.iter().map(|&d| faces.of[d]).collect();
    cyc.sort_unstable();
    expected.sort_unstable();
    if cyc != expected {
        return Err(BijectionError::Witness(
            "the oriented cycle does not surround the basepoint".into(),
        ));
    }
    Ok(())
}

/// Opening of a pointed quadrangulation. The root of the result is the new
/// edge created in the face on the right of the increasing version of the
/// root of `pq`, leaving the larger-labeled end of that root.
pub fn open_with_sign(pq: &PointedQuad) -> Result<OpeningResult, BijectionError> {
    let q = &pq.quad;
    check_bipartite_quadrangulation(q)?;
    let nv = q.n_vertices();
    if pq.basepoint >= nv {
        return Err(BijectionError::NoSuchVertex { vertex: pq.basepoint });
    }
    let vertex_of = q.vertex_of();
    let dist = crate::map_core::vertex_distances(q, pq.basepoint);
    let mut dl: Vec<i64> = vertex_of.iter().map(|&v| dist[v] as i64).collect();
    let n_old = q.n_darts();
    let inv = q.sigma_inverse();

    let root = q.root();
    let eps = if dl[q.alpha(root)] == dl[root] + 1 {
        root
    } else {
        q.alpha(root)
    };
    let sign = if eps == root { Sign::Plus } else { Sign::Minus };
    let root_corner = q.alpha(eps);

    let mut q1 = q.clone();
    let mut new_root = usize::MAX;
    for (fi, cyc) in q.faces().cycles.iter().enumerate() {
        let m = cyc.len();
        let picked: Vec<usize> = (0..m)
            .filter(|&i| dl[cyc[i]] > dl[cyc[(i + m - 1) % m]])
            .map(|i| inv[cyc[i]])
            .collect();
        if picked.len() != 2 {
            return Err(BijectionError::FaceRule {
                face: fi,
                found: picked.len(),
            });
        }
        let a = q1.push_edge_at_corners(Corner(picked[0]), Corner(picked[1]));
        dl.push(dl[picked[0]]);
        dl.push(dl[picked[1]]);
        if picked[0] == root_corner {
            new_root = a;
        } else if picked[1] == root_corner {
            new_root = a + 1;
        }
    }
    debug_assert_ne!(new_root, usize::MAX);

    let v0_darts = q.vertices().cycles[pq.basepoint].clone();
    check_dual_orientation(&q1, n_old, &dl, &v0_darts)?;

    let v0 = pq.basepoint;
    let away: Vec<usize> = (0..n_old)
        .filter(|&d| d < q.alpha(d) && vertex_of[d] != v0 && vertex_of[q.alpha(d)] != v0)
        .collect();
    let s1 = q1.delete_edges(&away)?;
    let v0_dart = s1.old_to_new[v0_darts[0]].expect("basepoint edges are kept");
    let v0_new = s1.map.vertex_of()[v0_dart];
    let s2 = s1.map.delete_vertex_star(v0_new)?;

    // compose dart maps and carry labels
    let n1 = s1.map.n_darts();
    let mut final_labels: Vec<i64> = vec![0; s2.map.n_darts()];
    let mut back = vec![usize::MAX; n1];
    for (d, nd) in s1.old_to_new.iter().enumerate() {
        if let Some(nd) = nd {
            back[*nd] = d;
        }
    }
    for (d1, nd) in s2.old_to_new.iter().enumerate() {
        if let Some(nd) = nd {
            final_labels[*nd] = dl[back[d1]];
        }
    }
    let root_t = s1.old_to_new[new_root]
        .and_then(|d| s2.old_to_new[d])
        .expect("new edges survive the opening");
    let map = s2.map.with_root(root_t);
    let labels = map
        .vertices()
        .cycles
        .iter()
        .map(|cyc| final_labels[cyc[0]])
        .collect();
    let tree = LabeledMap { map, labels };
    debug_assert_eq!(tree.map.n_faces(), 1);
    debug_assert!(is_almost_well_labeled(&tree));
    Ok(OpeningResult { tree, sign })
}

/// Labeled one-face map with distance labels (minimum label 1).
pub fn open(pq: &PointedQuad) -> Result<LabeledMap, BijectionError> {
    Ok(open_with_sign(pq)?.tree)
}

/// Rooted opening, basepoint at the root vertex. The result is well
/// labeled and rooted at a dart of label 1.
pub fn open_rooted(q: &RotationMap) -> Result<LabeledMap, BijectionError> {
    let v0 = q.vertex_of()[q.root()];
    let r = open_with_sign(&PointedQuad {
        quad: q.clone(),
        basepoint: v0,
    })?;
    debug_assert_eq!(r.sign, Sign::Plus);
    Ok(r.tree)
}

/// Rooted pointed opening followed by the translation putting the root
/// label at 1.
pub fn open_rooted_pointed(pq: &PointedQuad) -> Result<(LabeledMap, Sign), BijectionError> {
    let r = open_with_sign(pq)?;
    Ok((relabel_nu(&r.tree), r.sign))
}

/// The map obtained from a labeled tree by adding the basepoint and all
/// closure edges, before the tree edges are removed.
#[derive(Debug, Clone)]
pub struct Closure {
    /// tree darts keep their numbers `0..n_tree_darts`
    pub full: RotationMap,
    pub dart_labels: Vec<i64>,
    pub n_tree_darts: usize,
    pub v0_dart: usize,
}

impl Closure {
    /// Removes the tree edges. `full_root` is a dart of `full` that is not a
    /// tree dart.
    pub fn to_pointed_quad(&self, full_root: usize) -> Result<PointedQuad, BijectionError> {
        let removed: Vec<bool> = (0..self.full.n_darts()).map(|d| d < self.n_tree_darts).collect();
        let s = self.full.with_root(full_root).remove_darts(&removed)?;
        let v0 = s.old_to_new[self.v0_dart].unwrap();
        let quad = s.map;
        let basepoint = quad.vertex_of()[v0];
        Ok(PointedQuad { quad, basepoint })
    }

    /// Root of the quadrangulation encoded by the root of the tree and a
    /// sign: the closure edge preceding the tree root counterclockwise,
    /// oriented towards the root vertex for `Plus`.
    pub fn quad_root(&self, tree_root: usize, sign: Sign) -> usize {
        let inv = self.full.sigma_inverse();
        let incoming = self.full.alpha(inv[tree_root]);
        match sign {
            Sign::Plus => incoming,
            Sign::Minus => self.full.alpha(incoming),
        }
    }
}

fn check_closable(t: &LabeledMap) -> Result<(), BijectionError> {
    let faces = t.map.n_faces();
    if faces != 1 {
        return Err(BijectionError::NotOneFace { faces });
    }
    t.check_variations()?;
    if t.min_label() != 1 {
        return Err(BijectionError::BadLabels {
            expected: "of minimum 1",
        });
    }
    Ok(())
}

/// First corner clockwise after `c` in its face with label one less than
/// the label of `c`.
pub fn predecessor(t: &LabeledMap, c: Corner) -> Result<Corner, BijectionError> {
    let m = &t.map;
    if c.0 >= m.n_darts() {
        return Err(MapError::OutOfRange {
            perm: "corner",
            dart: c.0,
            n_darts: m.n_darts(),
        }
        .into());
    }
    let dl = dart_labels_of(t);
    let inv = m.sigma_inverse();
    let target = dl[c.0] - 1;
    let start = m.sigma(c.0);
    let mut y = m.phi(start);
    while y != start {
        if dl[y] == target {
            return Ok(Corner(inv[y]));
        }
        y = m.phi(y);
    }
    Err(BijectionError::NoPredecessor { corner: c.0 })
}

/// State for the step-by-step closure: sigma with its inverse kept in sync.
struct Growing {
    sigma: Vec<usize>,
    inv: Vec<usize>,
    alpha: Vec<usize>,
    dl: Vec<i64>,
}

impl Growing {
    fn phi(&self, d: usize) -> usize {
        self.sigma[self.alpha[d]]
    }

    /// New edge with first dart at corner `c1` and second at `c2`.
    fn insert(&mut self, c1: usize, c2: usize) -> usize {
        let a = self.sigma.len();
        let b = a + 1;
        let l1 = self.dl[c1];
        let l2 = self.dl[c2];
        self.sigma.extend([0, 0]);
        self.inv.extend([0, 0]);
        self.alpha.extend([b, a]);
        self.dl.extend([l1, l2]);
        let n1 = self.sigma[c1];
        self.link(c1, a);
        self.link(a, n1);
        let n2 = self.sigma[c2];
        self.link(c2, b);
        self.link(b, n2);
        a
    }

    fn link(&mut self, d: usize, e: usize) {
        self.sigma[d] = e;
        self.inv[e] = d;
    }
}

/// Closure following the explicit three-phase construction, inserting one
/// edge at a time and locating predecessors by walking the current face.
pub fn closure_literal(t: &LabeledMap) -> Result<Closure, BijectionError> {
    check_closable(t)?;
    let m = &t.map;
    let n = m.n_darts();
    let mut g = Growing {
        sigma: m.sigma_slice().to_vec(),
        inv: m.sigma_inverse(),
        alpha: m.alpha_slice().to_vec(),
        dl: dart_labels_of(t),
    };

    // phase 1: corners of label 1 in clockwise order around the face
    let face: Vec<usize> = {
        let mut f = vec![m.root()];
        let mut y = m.phi(m.root());
        while y != m.root() {
            f.push(y);
            y = m.phi(y);
        }
        f
    };
    let ones: Vec<usize> = face.iter().map(|&y| g.inv[y]).filter(|&c| g.dl[c] == 1).collect();
    let k = ones.len();
    let base = g.sigma.len();
    for _ in 0..k {
        g.sigma.extend([0, 0]);
        g.inv.extend([0, 0]);
        g.alpha.extend([0, 0]);
        g.dl.extend([1, 0]);
    }
    for (i, &c) in ones.iter().enumerate() {
        let a = base + 2 * i;
        let b = a + 1;
        g.alpha[a] = b;
        g.alpha[b] = a;
        let next = g.sigma[c];
        g.link(c, a);
        g.link(a, next);
        let b_next_cw = base + 2 * ((i + 1) % k) + 1;
        g.link(b_next_cw, b);
    }

    // corner lists of the faces around v0, clockwise from the v0 corner
    let mut rounds: Vec<Vec<usize>> = Vec::with_capacity(k);
    for i in 0..k {
        let b = base + 2 * i + 1;
        let y0 = g.sigma[b];
        let mut corners = Vec::new();
        let mut y = g.phi(y0);
        while y != y0 {
            corners.push(g.inv[y]);
            y = g.phi(y);
        }
        rounds.push(corners);
    }

    // phase 2: counterclockwise within each face
    for corners in &rounds {
        for &c in corners.iter().rev() {
            let l = g.dl[c];
            if l <= 1 {
                continue;
            }
            let y0 = g.sigma[c];
            let mut y = g.phi(y0);
            let mut steps = 0;
            while g.dl[y] != l - 1 {
                y = g.phi(y);
                steps += 1;
                if y == y0 || steps > 4 * g.sigma.len() {
                    return Err(BijectionError::NoPredecessor { corner: c });
                }
            }
            let target = g.inv[y];
            g.insert(c, target);
        }
    }

    let v0_dart = base + 1;
    let full = RotationMap::new(g.sigma, g.alpha, m.root())?;
    Ok(Closure {
        full,
        dart_labels: g.dl,
        n_tree_darts: n,
        v0_dart,
    })
}

/// Closure computed directly from the cyclic label sequence of the face,
/// in linear time. Produces the same map as [`closure_literal`] up to the
/// numbering of the added darts.
pub fn closure_fast(t: &LabeledMap) -> Result<Closure, BijectionError> {
    check_closable(t)?;
    let m = &t.map;
    let n = m.n_darts();
    let dl = dart_labels_of(t);
    let inv = m.sigma_inverse();
    // face darts y_p clockwise; corner p sits before y_p
    let mut y = Vec::with_capacity(n);
    y.push(m.root());
    let mut d = m.phi(m.root());
    while d != m.root() {
        y.push(d);
        d = m.phi(d);
    }
    debug_assert_eq!(y.len(), n);
    let lab: Vec<i64> = y.iter().map(|&d| dl[d]).collect();
    let max_label = *lab.iter().max().unwrap() as usize;

    // pred[p]: first position after p (cyclically) with label lab[p] - 1
    let mut pred = vec![usize::MAX; n];
    let mut next_pos = vec![usize::MAX; max_label + 1];
    for step in (0..2 * n).rev() {
        let p = step % n;
        if step < n && lab[p] >= 2 {
            pred[p] = next_pos[(lab[p] - 1) as usize];
        }
        next_pos[lab[p] as usize] = p;
    }

    // chord from corner p: darts n + 2p (at p) and n + 2p + 1 (far end)
    let total = 3 * n;
    let mut sigma = vec![usize::MAX; total];
    let mut alpha = vec![0; total];
    let mut labels = vec![0i64; total];
    alpha[..n].copy_from_slice(m.alpha_slice());
    labels[..n].copy_from_slice(&dl);
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut ones = Vec::new();
    for p in 0..n {
        let a = n + 2 * p;
        alpha[a] = a + 1;
        alpha[a + 1] = a;
        labels[a] = lab[p];
        if lab[p] == 1 {
            ones.push(p);
        } else {
            incoming[pred[p]].push(p);
            labels[a + 1] = lab[p] - 1;
        }
    }
    for p in 0..n {
        let kappa = inv[y[p]];
        let mut ins = std::mem::take(&mut incoming[p]);
        ins.sort_by_key(|&r| (p + n - r) % n);
        let mut cur = kappa;
        for r in ins {
            let far = n + 2 * r + 1;
            sigma[cur] = far;
            cur = far;
        }
        let out = n + 2 * p;
        sigma[cur] = out;
        sigma[out] = y[p];
    }
    let k = ones.len();
    for i in 0..k {
        let b = n + 2 * ones[i] + 1;
        let b_next_cw = n + 2 * ones[(i + 1) % k] + 1;
        sigma[b_next_cw] = b;
    }
    let v0_dart = n + 2 * ones[0] + 1;
    let full = RotationMap::new(sigma, alpha, m.root())?;
    Ok(Closure {
        full,
        dart_labels: labels,
        n_tree_darts: n,
        v0_dart,
    })
}

/// Closure of a rooted labeled one-face map with minimum label 1. With
/// `Plus` the root of the quadrangulation points from the predecessor of
/// the tree root corner to the tree root vertex; `Minus` reverses it.
pub fn close_with_sign(t: &LabeledMap, sign: Sign) -> Result<PointedQuad, BijectionError> {
    let c = closure_fast(t)?;
    let root = c.quad_root(t.map.root(), sign);
    c.to_pointed_quad(root)
}

pub fn close(t: &LabeledMap) -> Result<PointedQuad, BijectionError> {
    close_with_sign(t, Sign::Plus)
}

/// Same as [`close_with_sign`] using the step-by-step construction.
pub fn close_literal_with_sign(t: &LabeledMap, sign: Sign) -> Result<PointedQuad, BijectionError> {
    let c = closure_literal(t)?;
    let root = c.quad_root(t.map.root(), sign);
    c.to_pointed_quad(root)
}

/// Inverse of [`open_rooted`]: a rooted well-labeled one-face map gives a
/// rooted quadrangulation whose root vertex is the basepoint.
pub fn close_rooted(t: &LabeledMap) -> Result<RotationMap, BijectionError> {
    if t.root_label() != 1 {
        return Err(BijectionError::BadLabels {
            expected: "well labeled (root label 1)",
        });
    }
    Ok(close_with_sign(t, Sign::Plus)?.quad)
}

/// Inverse of [`open_rooted_pointed`].
pub fn close_rooted_pointed(t: &LabeledMap, sign: Sign) -> Result<PointedQuad, BijectionError> {
    if !is_embedded(t) {
        return Err(BijectionError::BadLabels { expected: "embedded" });
    }
    close_with_sign(&normalize_min(t), sign)
}
