//! Vertex labels on maps: distance labelings of pointed quadrangulations
//! and the embedded / well-labeled conditions on one-face maps.

use thiserror::Error;

use crate::map_core::{vertex_distances, RotationMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("expected {expected} labels (one per vertex), found {found}")]
    Count { expected: usize, found: usize },
    #[error("labels across edge of dart {dart} differ by {diff}")]
    Variation { dart: usize, diff: i64 },
    #[error("vertex {vertex} does not exist")]
    NoSuchVertex { vertex: usize },
}

/// A map with one integer label per vertex. Vertices are numbered as in
/// [`RotationMap::vertices`], that is by increasing minimum dart.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledMap {
    pub map: RotationMap,
    pub labels: Vec<i64>,
}

impl LabeledMap {
    pub fn new(map: RotationMap, labels: Vec<i64>) -> Result<Self, LabelError> {
        let v = map.n_vertices();
        if labels.len() != v {
            return Err(LabelError::Count {
                expected: v,
                found: labels.len(),
            });
        }
        Ok(LabeledMap { map, labels })
    }

    /// Label of the origin of every dart.
    pub fn dart_labels(&self) -> Vec<i64> {
        self.map.vertex_of().into_iter().map(|v| self.labels[v]).collect()
    }

    pub fn root_label(&self) -> i64 {
        self.labels[self.map.vertex_of()[self.map.root()]]
    }

    pub fn min_label(&self) -> i64 {
        *self.labels.iter().min().expect("maps have at least one vertex")
    }

    pub fn max_label(&self) -> i64 {
        *self.labels.iter().max().expect("maps have at least one vertex")
    }

    /// Largest label difference across an edge.
    pub fn max_variation(&self) -> i64 {
        let dl = self.dart_labels();
        (0..self.map.n_darts())
            .map(|d| (dl[d] - dl[self.map.alpha(d)]).abs())
            .max()
            .unwrap_or(0)
    }

    pub fn check_variations(&self) -> Result<(), LabelError> {
        let dl = self.dart_labels();
        for d in 0..self.map.n_darts() {
            let diff = dl[self.map.alpha(d)] - dl[d];
            if diff.abs() > 1 {
                return Err(LabelError::Variation { dart: d, diff });
            }
        }
        Ok(())
    }

    /// Adds `shift` to every label.
    pub fn shifted(&self, shift: i64) -> LabeledMap {
        LabeledMap {
            map: self.map.clone(),
            labels: self.labels.iter().map(|l| l + shift).collect(),
        }
    }

    /// Same map and labels with another root dart.
    pub fn with_root(&self, root: usize) -> LabeledMap {
        LabeledMap {
            map: self.map.with_root(root),
            labels: self.labels.clone(),
        }
    }

    /// Canonical dart numbering with labels carried along.
    pub fn canonical_form(&self) -> LabeledMap {
        let perm = self.map.canonical_relabeling();
        self.relabel(&perm)
    }

    pub fn relabel(&self, perm: &[usize]) -> LabeledMap {
        let old_vertex = self.map.vertex_of();
        let map = self.map.relabel(perm).expect("valid dart permutation");
        let vertices = map.vertices();
        let mut inv = vec![0; perm.len()];
        for (d, &p) in perm.iter().enumerate() {
            inv[p] = d;
        }
        let labels = vertices
            .cycles
            .iter()
            .map(|cyc| self.labels[old_vertex[inv[cyc[0]]]])
            .collect();
        LabeledMap { map, labels }
    }
}

/// Graph distances to `v0`; the basepoint gets label 0.
pub fn distance_labels(q: &RotationMap, v0: usize) -> Result<LabeledMap, LabelError> {
    let nv = q.n_vertices();
    if v0 >= nv {
        return Err(LabelError::NoSuchVertex { vertex: v0 });
    }
    let labels = vertex_distances(q, v0).into_iter().map(|d| d as i64).collect();
    Ok(LabeledMap {
        map: q.clone(),
        labels,
    })
}

/// Variations at most one and root label 1.
pub fn is_embedded(t: &LabeledMap) -> bool {
    t.check_variations().is_ok() && t.root_label() == 1
}

/// Embedded with minimum label 1.
pub fn is_well_labeled(t: &LabeledMap) -> bool {
    is_embedded(t) && t.min_label() == 1
}

/// Variations at most one and minimum label 1, with no condition on the
/// root label. These are the outputs of the opening.
pub fn is_almost_well_labeled(t: &LabeledMap) -> bool {
    t.check_variations().is_ok() && t.min_label() == 1
}

/// Translates all labels so that the root vertex has label 1.
pub fn relabel_nu(t: &LabeledMap) -> LabeledMap {
    t.shifted(1 - t.root_label())
}

/// Translates all labels so that the minimum label is 1.
pub fn normalize_min(t: &LabeledMap) -> LabeledMap {
    t.shifted(1 - t.min_label())
}
