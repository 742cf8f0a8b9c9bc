//! Correspondence between maps of genus g with n edges and bipartite
//! quadrangulations of genus g with n faces.
//!
//! Each face of a map receives a new white vertex joined to all corners of
//! the face; the original edges are then erased. The root of the
//! quadrangulation is the edge leaving the root vertex of `m` with the root
//! edge of `m` on its right.

use std::collections::VecDeque;

use thiserror::Error;

use crate::map_core::{MapError, RotationMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("face {face} has degree {degree}, expected 4")]
    NotQuadrangular { face: usize, degree: usize },
    #[error("quadrangulation is not bipartite (odd cycle through dart {dart})")]
    NotBipartite { dart: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A quadrangulation with a marked vertex (the basepoint, a vertex index).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointedQuad {
    pub quad: RotationMap,
    pub basepoint: usize,
}

impl PointedQuad {
    /// Canonical numbering with the basepoint carried along.
    pub fn canonical_form(&self) -> PointedQuad {
        let perm = self.quad.canonical_relabeling();
        let dart = self.quad.vertices().cycles[self.basepoint][0];
        let quad = self.quad.relabel(&perm).expect("valid dart permutation");
        let basepoint = quad.vertex_of()[perm[dart]];
        PointedQuad { quad, basepoint }
    }

    /// Isomorphism key forgetting the root.
    pub fn unrooted_key(&self) -> (RotationMap, usize) {
        (0..self.quad.n_darts())
            .map(|r| {
                let p = PointedQuad {
                    quad: self.quad.with_root(r),
                    basepoint: self.basepoint,
                }
                .canonical_form();
                (p.quad, p.basepoint)
            })
            .min()
            .expect("maps have darts")
    }
}

/// Two-coloring of the vertices with the root vertex in class `false`
/// (black). Fails on an odd cycle.
pub fn bipartition(q: &RotationMap) -> Result<Vec<bool>, QuadError> {
    let vertices = q.vertices();
    let mut color: Vec<Option<bool>> = vec![None; vertices.len()];
    let root_v = vertices.of[q.root()];
    color[root_v] = Some(false);
    let mut queue = VecDeque::from([root_v]);
    while let Some(v) = queue.pop_front() {
        let c = color[v].unwrap();
        for &d in &vertices.cycles[v] {
            let w = vertices.of[q.alpha(d)];
            match color[w] {
                None => {
                    color[w] = Some(!c);
                    queue.push_back(w);
                }
                Some(cw) if cw == c => return Err(QuadError::NotBipartite { dart: d }),
                Some(_) => {}
            }
        }
    }
    Ok(color.into_iter().map(|c| c.unwrap()).collect())
}

pub fn check_quadrangulation(q: &RotationMap) -> Result<(), QuadError> {
    for (face, cyc) in q.faces().cycles.iter().enumerate() {
        if cyc.len() != 4 {
            return Err(QuadError::NotQuadrangular {
                face,
                degree: cyc.len(),
            });
        }
    }
    Ok(())
}

/// Checks all faces have degree 4 and the map is bipartite; returns the
/// coloring (true = white).
pub fn check_bipartite_quadrangulation(q: &RotationMap) -> Result<Vec<bool>, QuadError> {
    check_quadrangulation(q)?;
    bipartition(q)
}

/// Quadrangulation of a rooted map. The corner of `m` at dart `c` becomes
/// the quad edge with black dart `2c` and white dart `2c + 1`.
pub fn map_to_quad(m: &RotationMap) -> RotationMap {
    let n = m.n_darts();
    let inv = m.sigma_inverse();
    let mut sigma = vec![0; 2 * n];
    for c in 0..n {
        sigma[2 * c] = 2 * m.sigma(c);
    }
    // corners of a face in clockwise order are sigma^-1 of its phi-orbit;
    // the white vertex turns the other way
    for x in 0..n {
        let here = inv[x];
        let next_cw = inv[m.phi(x)];
        sigma[2 * next_cw + 1] = 2 * here + 1;
    }
    RotationMap::from_parts_trusted(sigma, crate::map_core::standard_alpha(2 * n), 2 * m.root())
}

/// Inverse of [`map_to_quad`] on rooted bipartite quadrangulations; the
/// root vertex is taken black.
pub fn quad_to_map(q: &RotationMap) -> Result<RotationMap, QuadError> {
    let white = check_bipartite_quadrangulation(q)?;
    let vertex_of = q.vertex_of();
    // map darts are the black darts of q; the corner of the map at a dart is
    // the quad edge it names
    let mut index = vec![usize::MAX; q.n_darts()];
    let mut black = Vec::new();
    for x in 0..q.n_darts() {
        if !white[vertex_of[x]] {
            index[x] = black.len();
            black.push(x);
        }
    }
    let n = black.len();
    let mut sigma = vec![0; n];
    let mut alpha = vec![0; n];
    for (i, &x) in black.iter().enumerate() {
        sigma[i] = index[q.sigma(x)];
        alpha[i] = index[q.phi(q.phi(x))];
    }
    let root = index[q.root()];
    Ok(RotationMap::new(sigma, alpha, root)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_core::examples::*;

    #[test]
    fn single_edge_gives_path_quadrangulation() {
        let q = map_to_quad(&single_edge());
        assert_eq!(q.diagnostics().counts, (3, 2, 1));
        assert_eq!(q.face_degrees(), vec![4]);
        let white = bipartition(&q).unwrap();
        assert_eq!(white.iter().filter(|w| **w).count(), 1);
    }

    #[test]
    fn planar_loop_gives_path_with_black_middle() {
        let q = map_to_quad(&planar_loop());
        assert_eq!(q.diagnostics().counts, (3, 2, 1));
        let white = bipartition(&q).unwrap();
        let deg = q.vertex_degrees();
        let black = white.iter().position(|w| !*w).unwrap();
        assert_eq!(white.iter().filter(|w| **w).count(), 2);
        assert_eq!(deg[black], 2);
        assert_eq!(q.face_degrees(), vec![4]);
    }

    #[test]
    fn counts_and_genus_are_preserved() {
        for m in [path3(), cycle(3), cycle(4), figure_eight_torus(), one_vertex_genus(2)] {
            let q = map_to_quad(&m);
            let white = check_bipartite_quadrangulation(&q).unwrap();
            let nw = white.iter().filter(|w| **w).count();
            assert_eq!(nw, m.n_faces());
            assert_eq!(white.len() - nw, m.n_vertices());
            assert_eq!(q.n_edges(), 2 * m.n_edges());
            assert_eq!(q.n_faces(), m.n_edges());
            assert_eq!(q.genus().unwrap(), m.genus().unwrap());
        }
    }

    #[test]
    fn inverse_on_all_rootings() {
        for m in [single_edge(), planar_loop(), path3(), cycle(4), figure_eight_torus()] {
            for r in 0..m.n_darts() {
                let mr = m.with_root(r);
                let back = quad_to_map(&map_to_quad(&mr)).unwrap();
                assert_eq!(back, mr);
            }
        }
    }

    #[test]
    fn torus_quadrangulation_with_two_faces() {
        let q = map_to_quad(&figure_eight_torus());
        assert_eq!(q.n_faces(), 2);
        let m = quad_to_map(&q).unwrap();
        assert_eq!(m.canonical_form(), figure_eight_torus().canonical_form());
    }

    #[test]
    fn rejects_non_quadrangulations() {
        assert!(matches!(
            quad_to_map(&cycle(3)),
            Err(QuadError::NotQuadrangular { .. })
        ));
    }

    #[test]
    fn rejects_non_bipartite_quadrangulation() {
        // the one-vertex torus map with two loops has a single face of
        // degree 4 but its loops are odd cycles
        let q = figure_eight_torus();
        assert_eq!(q.face_degrees(), vec![4]);
        assert!(matches!(quad_to_map(&q), Err(QuadError::NotBipartite { .. })));
    }
}
