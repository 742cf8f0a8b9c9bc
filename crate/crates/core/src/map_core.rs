//! Rotation-system representation of rooted maps on orientable surfaces.
//!
//! A map with `n` edges is stored as two permutations of `0..2n`: `sigma`
//! turns counterclockwise around the origin vertex of a dart and `alpha`
//! exchanges the two darts of an edge. Faces are the orbits of
//! `phi = sigma ∘ alpha`, so `phi(d) = sigma(alpha(d))`; the face orbit of
//! `d` is the face lying on the right of `d`, and following `phi` walks
//! around that face in clockwise direction.
//!
//! Darts are 0-indexed in memory. The text format (see [`crate::format`])
//! is 1-indexed.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map has no darts")]
    Empty,
    #[error("array length {found} does not match n_darts = {expected}")]
    Length { expected: usize, found: usize },
    #[error("{perm}: dart {dart} maps outside 0..{n_darts}")]
    OutOfRange {
        perm: &'static str,
        dart: usize,
        n_darts: usize,
    },
    #[error("{perm} is not a permutation: dart {dart} is the image of two darts")]
    NotAPermutation { perm: &'static str, dart: usize },
    #[error("alpha is not a fixed-point-free involution at dart {dart}")]
    NotAnInvolution { dart: usize },
    #[error("root dart {root} is out of range")]
    BadRoot { root: usize },
    #[error("map is not connected: dart {dart} is unreachable from the root")]
    Disconnected { dart: usize },
    #[error("odd Euler defect: v - n + f = {chi}")]
    OddEuler { chi: i64 },
    #[error("corners {c1} and {c2} are not incident to the same face")]
    CornersInDifferentFaces { c1: usize, c2: usize },
    #[error("dual edges of the deleted set contain a cycle (edge of dart {dart})")]
    DualCycle { dart: usize },
    #[error("vertex {vertex} is incident twice to the same face")]
    RepeatedFace { vertex: usize },
    #[error("vertex {vertex} carries a loop")]
    LoopAtVertex { vertex: usize },
    #[error("vertex {vertex} does not exist")]
    NoSuchVertex { vertex: usize },
    #[error("surgery would leave a map without edges")]
    NothingLeft,
}

/// The corner between `dart` and `sigma(dart)` at their common origin.
///
/// A corner is incident to the face lying on the left of `dart`, which is
/// the face on the right of `sigma(dart)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner(pub usize);

/// Orbit decomposition of a permutation.
///
/// Orbits are numbered by increasing minimum dart, and each orbit is listed
/// starting at its minimum dart and following the permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbits {
    pub of: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
}

impl Orbits {
    pub fn of_permutation(perm: &[usize]) -> Self {
        let mut of = vec![usize::MAX; perm.len()];
        let mut cycles = Vec::new();
        for start in 0..perm.len() {
            if of[start] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cycle = Vec::new();
            let mut d = start;
            while of[d] == usize::MAX {
                of[d] = id;
                cycle.push(d);
                d = perm[d];
            }
            cycles.push(cycle);
        }
        Orbits { of, cycles }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDiagnostics {
    pub connected: bool,
    pub involution_ok: bool,
    pub genus: Option<usize>,
    /// (vertices, edges, faces)
    pub counts: (usize, usize, usize),
}

/// Result of an edge or vertex deletion: the new map and where each old
/// dart went (`None` for deleted darts).
#[derive(Debug, Clone)]
pub struct Surgery {
    pub map: RotationMap,
    pub old_to_new: Vec<Option<usize>>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RotationMap {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    root: usize,
}

impl fmt::Debug for RotationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RotationMap {{ sigma: {:?}, alpha: {:?}, root: {} }}",
            self.sigma, self.alpha, self.root
        )
    }
}

fn check_permutation(perm: &[usize], name: &'static str) -> Result<(), MapError> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for (dart, &img) in perm.iter().enumerate() {
        if img >= n {
            return Err(MapError::OutOfRange {
                perm: name,
                dart,
                n_darts: n,
            });
        }
        if seen[img] {
            return Err(MapError::NotAPermutation {
                perm: name,
                dart: img,
            });
        }
        seen[img] = true;
    }
    Ok(())
}

/// The standard edge pairing `0<->1, 2<->3, ...`.
pub fn standard_alpha(n_darts: usize) -> Vec<usize> {
    (0..n_darts).map(|d| d ^ 1).collect()
}

impl RotationMap {
    /// Builds a map, checking that it is a connected rotation system.
    pub fn new(sigma: Vec<usize>, alpha: Vec<usize>, root: usize) -> Result<Self, MapError> {
        let m = Self::new_unchecked_connectivity(sigma, alpha, root)?;
        if let Some(dart) = m.first_unreachable() {
            return Err(MapError::Disconnected { dart });
        }
        Ok(m)
    }

    /// Structural checks only: permutations, involution, root.
    fn new_unchecked_connectivity(
        sigma: Vec<usize>,
        alpha: Vec<usize>,
        root: usize,
    ) -> Result<Self, MapError> {
        let n = sigma.len();
        if n == 0 {
            return Err(MapError::Empty);
        }
        if alpha.len() != n {
            return Err(MapError::Length {
                expected: n,
                found: alpha.len(),
            });
        }
        check_permutation(&sigma, "sigma")?;
        check_permutation(&alpha, "alpha")?;
        for d in 0..n {
            if alpha[d] == d || alpha[alpha[d]] != d {
                return Err(MapError::NotAnInvolution { dart: d });
            }
        }
        if root >= n {
            return Err(MapError::BadRoot { root });
        }
        Ok(RotationMap { sigma, alpha, root })
    }

    /// Builds a map from `sigma` with the standard pairing `2k <-> 2k+1`.
    pub fn from_sigma(sigma: Vec<usize>, root: usize) -> Result<Self, MapError> {
        let alpha = standard_alpha(sigma.len());
        Self::new(sigma, alpha, root)
    }

    pub(crate) fn from_parts_trusted(sigma: Vec<usize>, alpha: Vec<usize>, root: usize) -> Self {
        debug_assert!(Self::new(sigma.clone(), alpha.clone(), root).is_ok());
        RotationMap { sigma, alpha, root }
    }

    fn first_unreachable(&self) -> Option<usize> {
        let n = self.n_darts();
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        seen[self.root] = true;
        while let Some(d) = stack.pop() {
            for next in [self.sigma[d], self.alpha[d]] {
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn n_darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn n_edges(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn sigma(&self, d: usize) -> usize {
        self.sigma[d]
    }

    pub fn alpha(&self, d: usize) -> usize {
        self.alpha[d]
    }

    pub fn phi(&self, d: usize) -> usize {
        self.sigma[self.alpha[d]]
    }

    pub fn sigma_slice(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha_slice(&self) -> &[usize] {
        &self.alpha
    }

    pub fn sigma_inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.n_darts()];
        for (d, &s) in self.sigma.iter().enumerate() {
            inv[s] = d;
        }
        inv
    }

    pub fn phi_permutation(&self) -> Vec<usize> {
        (0..self.n_darts()).map(|d| self.phi(d)).collect()
    }

    pub fn vertices(&self) -> Orbits {
        Orbits::of_permutation(&self.sigma)
    }

    pub fn faces(&self) -> Orbits {
        Orbits::of_permutation(&self.phi_permutation())
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices().len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces().len()
    }

    /// Vertex index (orbit number) of the origin of every dart.
    pub fn vertex_of(&self) -> Vec<usize> {
        self.vertices().of
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_faces() as i64
    }

    pub fn genus(&self) -> Result<usize, MapError> {
        let chi = self.euler_characteristic();
        if chi % 2 != 0 || chi > 2 {
            return Err(MapError::OddEuler { chi });
        }
        Ok(((2 - chi) / 2) as usize)
    }

    pub fn vertex_degree(&self, v: usize) -> usize {
        self.vertices().cycles[v].len()
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        self.vertices().cycles.iter().map(Vec::len).collect()
    }

    pub fn face_degree(&self, f: usize) -> usize {
        self.faces().cycles[f].len()
    }

    pub fn face_degrees(&self) -> Vec<usize> {
        self.faces().cycles.iter().map(Vec::len).collect()
    }

    /// Corners of face `f` in clockwise order, starting with the corner
    /// preceding the minimum dart of the face.
    pub fn corners_of_face(&self, f: usize) -> Vec<Corner> {
        let inv = self.sigma_inverse();
        self.faces().cycles[f].iter().map(|&x| Corner(inv[x])).collect()
    }

    /// Corners of vertex `v` in counterclockwise order.
    pub fn corners_of_vertex(&self, v: usize) -> Vec<Corner> {
        self.vertices().cycles[v].iter().map(|&d| Corner(d)).collect()
    }

    /// Face index of every corner (indexed by the corner's dart).
    pub fn face_of_corner(&self) -> Vec<usize> {
        let faces = self.faces();
        (0..self.n_darts()).map(|c| faces.of[self.sigma[c]]).collect()
    }

    /// Whether the face of `sigma(c1)` also contains `sigma(c2)`.
    pub fn same_face(&self, c1: Corner, c2: Corner) -> bool {
        let start = self.sigma[c1.0];
        let target = self.sigma[c2.0];
        let mut d = start;
        loop {
            if d == target {
                return true;
            }
            d = self.phi(d);
            if d == start {
                return false;
            }
        }
    }

    pub fn is_loop(&self, d: usize, vertex_of: &[usize]) -> bool {
        vertex_of[d] == vertex_of[self.alpha[d]]
    }

    pub fn with_root(&self, root: usize) -> RotationMap {
        assert!(root < self.n_darts(), "root out of range");
        RotationMap {
            sigma: self.sigma.clone(),
            alpha: self.alpha.clone(),
            root,
        }
    }

    /// Dual map: vertices and faces exchanged. With the convention
    /// `phi = sigma ∘ alpha` the construction is an exact involution.
    pub fn dual(&self) -> RotationMap {
        RotationMap {
            sigma: self.phi_permutation(),
            alpha: self.alpha.clone(),
            root: self.root,
        }
    }

    /// Renames dart `d` to `perm[d]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<RotationMap, MapError> {
        check_permutation(perm, "relabeling")?;
        let n = self.n_darts();
        if perm.len() != n {
            return Err(MapError::Length {
                expected: n,
                found: perm.len(),
            });
        }
        let mut sigma = vec![0; n];
        let mut alpha = vec![0; n];
        for d in 0..n {
            sigma[perm[d]] = perm[self.sigma[d]];
            alpha[perm[d]] = perm[self.alpha[d]];
        }
        Ok(RotationMap {
            sigma,
            alpha,
            root: perm[self.root],
        })
    }

    /// The dart relabeling used by [`Self::canonical_form`]: darts are
    /// numbered in order of discovery by a breadth-first traversal from the
    /// root that follows `sigma`, and the `alpha`-partner of a newly found
    /// dart receives the next number.
    pub fn canonical_relabeling(&self) -> Vec<usize> {
        let n = self.n_darts();
        let mut label = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        label[self.root] = 0;
        label[self.alpha[self.root]] = 1;
        order.push(self.root);
        order.push(self.alpha[self.root]);
        let mut i = 0;
        while i < order.len() {
            let s = self.sigma[order[i]];
            if label[s] == usize::MAX {
                let a = self.alpha[s];
                label[s] = order.len();
                order.push(s);
                label[a] = order.len();
                order.push(a);
            }
            i += 1;
        }
        debug_assert_eq!(order.len(), n, "canonical traversal requires a connected map");
        label
    }

    /// Complete isomorphism invariant of rooted maps. The result has the
    /// standard edge pairing and root 0.
    pub fn canonical_form(&self) -> RotationMap {
        let label = self.canonical_relabeling();
        self.relabel(&label).expect("canonical relabeling is a permutation")
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_form() == *self
    }

    /// Connectivity, involution and Euler checks on raw arrays.
    pub fn validate(sigma: &[usize], alpha: &[usize], root: usize) -> Result<MapDiagnostics, MapError> {
        let m = Self::new_unchecked_connectivity(sigma.to_vec(), alpha.to_vec(), root)?;
        let connected = m.first_unreachable().is_none();
        let v = m.n_vertices();
        let f = m.n_faces();
        let e = m.n_edges();
        let genus = if connected { m.genus().ok() } else { None };
        Ok(MapDiagnostics {
            connected,
            involution_ok: true,
            genus,
            counts: (v, e, f),
        })
    }

    pub fn diagnostics(&self) -> MapDiagnostics {
        MapDiagnostics {
            connected: true,
            involution_ok: true,
            genus: self.genus().ok(),
            counts: (self.n_vertices(), self.n_edges(), self.n_faces()),
        }
    }

    /// Inserts a new edge inside the face shared by corners `c1` and `c2`.
    ///
    /// Returns the new map and the new dart with origin at `c1`; its
    /// partner is the next dart and has origin at `c2`. The face on the
    /// right of the returned dart is the part of the old face that runs
    /// clockwise from `c2` back to `c1`.
    pub fn add_edge_in_face(&self, c1: Corner, c2: Corner) -> Result<(RotationMap, usize), MapError> {
        let n = self.n_darts();
        for c in [c1, c2] {
            if c.0 >= n {
                return Err(MapError::OutOfRange {
                    perm: "corner",
                    dart: c.0,
                    n_darts: n,
                });
            }
        }
        if !self.same_face(c1, c2) {
            return Err(MapError::CornersInDifferentFaces { c1: c1.0, c2: c2.0 });
        }
        let mut m = self.clone();
        let a = m.push_edge_at_corners(c1, c2);
        Ok((m, a))
    }

    /// In-place edge insertion without the face check.
    pub(crate) fn push_edge_at_corners(&mut self, c1: Corner, c2: Corner) -> usize {
        let a = self.sigma.len();
        let b = a + 1;
        self.sigma.extend([0, 0]);
        self.alpha.extend([b, a]);
        if c1 == c2 {
            let next = self.sigma[c1.0];
            self.sigma[c1.0] = a;
            self.sigma[a] = b;
            self.sigma[b] = next;
        } else {
            let n1 = self.sigma[c1.0];
            let n2 = self.sigma[c2.0];
            self.sigma[c1.0] = a;
            self.sigma[a] = n1;
            self.sigma[c2.0] = b;
            self.sigma[b] = n2;
        }
        a
    }

    /// Deletes the edges of the given darts (either dart of an edge may be
    /// given). Requires that the dual edges form a forest, which is checked.
    pub fn delete_edges(&self, darts: &[usize]) -> Result<Surgery, MapError> {
        let n = self.n_darts();
        let faces = self.faces();
        let mut uf = UnionFind::new(faces.len());
        let mut removed = vec![false; n];
        for &d in darts {
            if d >= n {
                return Err(MapError::OutOfRange {
                    perm: "edge",
                    dart: d,
                    n_darts: n,
                });
            }
            if removed[d] {
                continue;
            }
            let e = self.alpha[d];
            removed[d] = true;
            removed[e] = true;
            if !uf.union(faces.of[d], faces.of[e]) {
                return Err(MapError::DualCycle { dart: d });
            }
        }
        self.remove_darts(&removed)
    }

    /// Deletes vertex `v` and its incident edges. Requires the corners of
    /// `v` to lie in pairwise distinct faces and no loop at `v`.
    pub fn delete_vertex_star(&self, v: usize) -> Result<Surgery, MapError> {
        let vertices = self.vertices();
        if v >= vertices.len() {
            return Err(MapError::NoSuchVertex { vertex: v });
        }
        let star = &vertices.cycles[v];
        if star.iter().any(|&d| vertices.of[self.alpha[d]] == v) {
            return Err(MapError::LoopAtVertex { vertex: v });
        }
        let faces = self.faces();
        let mut seen = std::collections::HashSet::new();
        for &d in star {
            if !seen.insert(faces.of[d]) {
                return Err(MapError::RepeatedFace { vertex: v });
            }
        }
        let mut removed = vec![false; self.n_darts()];
        for &d in star {
            removed[d] = true;
            removed[self.alpha[d]] = true;
        }
        self.remove_darts(&removed)
    }

    /// Removes a set of darts closed under `alpha`, splicing the rotations,
    /// and compacts dart numbers. The result must be connected.
    pub(crate) fn remove_darts(&self, removed: &[bool]) -> Result<Surgery, MapError> {
        let n = self.n_darts();
        let mut old_to_new = vec![None; n];
        let mut next = 0;
        for d in 0..n {
            if !removed[d] {
                old_to_new[d] = Some(next);
                next += 1;
            }
        }
        if next == 0 {
            return Err(MapError::NothingLeft);
        }
        let mut sigma = vec![0; next];
        let mut alpha = vec![0; next];
        for d in 0..n {
            let Some(nd) = old_to_new[d] else { continue };
            let mut s = self.sigma[d];
            while removed[s] {
                s = self.sigma[s];
            }
            sigma[nd] = old_to_new[s].unwrap();
            alpha[nd] = old_to_new[self.alpha[d]].expect("removed set must be closed under alpha");
        }
        let root = match old_to_new[self.root] {
            Some(r) => r,
            None => {
                // next surviving dart around the root vertex, else the first survivor
                let mut s = self.sigma[self.root];
                while removed[s] && s != self.root {
                    s = self.sigma[s];
                }
                old_to_new[s].unwrap_or(0)
            }
        };
        let map = RotationMap::new(sigma, alpha, root)?;
        Ok(Surgery { map, old_to_new })
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Breadth-first graph distances from vertex `v0`, indexed by vertex.
pub fn vertex_distances(m: &RotationMap, v0: usize) -> Vec<usize> {
    let vertices = m.vertices();
    let mut dist = vec![usize::MAX; vertices.len()];
    let mut queue = VecDeque::new();
    dist[v0] = 0;
    queue.push_back(v0);
    while let Some(v) = queue.pop_front() {
        for &d in &vertices.cycles[v] {
            let w = vertices.of[m.alpha(d)];
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Small hand-built maps used across tests and examples.
pub mod examples {
    use super::RotationMap;

    /// Single edge between two vertices.
    pub fn single_edge() -> RotationMap {
        RotationMap::from_sigma(vec![0, 1], 0).unwrap()
    }

    /// Planar loop at one vertex.
    pub fn planar_loop() -> RotationMap {
        RotationMap::from_sigma(vec![1, 0], 0).unwrap()
    }

    /// Path a - b - c: edges (0,1) and (2,3), middle vertex holds darts 1, 2.
    pub fn path3() -> RotationMap {
        RotationMap::from_sigma(vec![0, 2, 1, 3], 0).unwrap()
    }

    /// One vertex, two loops, one face: the torus figure-eight.
    pub fn figure_eight_torus() -> RotationMap {
        // rotation 0 -> 2 -> 1 -> 3 -> 0 interleaves the two loops
        RotationMap::from_sigma(vec![2, 3, 1, 0], 0).unwrap()
    }

    /// Cycle on `k` vertices in the plane; edge i joins vertex i and i+1.
    pub fn cycle(k: usize) -> RotationMap {
        // dart 2i leaves vertex i forward, dart 2i+1 leaves vertex i+1 backward
        let mut sigma = vec![0; 2 * k];
        for i in 0..k {
            let fwd = 2 * i;
            let back_into_i = 2 * ((i + k - 1) % k) + 1;
            sigma[fwd] = back_into_i;
            sigma[back_into_i] = fwd;
        }
        RotationMap::from_sigma(sigma, 0).unwrap()
    }

    /// One vertex whose single face is bounded by a 4g-gon with the
    /// standard identification a1 b1 a1^-1 b1^-1 ... : genus g.
    pub fn one_vertex_genus(g: usize) -> RotationMap {
        // face cycle darts 0..4g in order; pair positions 4i<->4i+2, 4i+1<->4i+3
        let n = 4 * g;
        let mut alpha = vec![0; n];
        for i in 0..g {
            let b = 4 * i;
            alpha[b] = b + 2;
            alpha[b + 2] = b;
            alpha[b + 1] = b + 3;
            alpha[b + 3] = b + 1;
        }
        // phi = sigma ∘ alpha is the cycle d -> d+1, hence sigma(d) = alpha(d) + 1
        let sigma: Vec<usize> = (0..n).map(|d| (alpha[d] + 1) % n).collect();
        RotationMap::new(sigma, alpha, 0).unwrap()
    }
}
