//! Text format for maps: one JSON object per line with 1-indexed darts.
//!
//! Fields: `n_darts`, `sigma` and `alpha` (images of darts 1..n_darts),
//! `root`, and optionally `labels` (one per vertex, vertices ordered by their
//! smallest dart), `basepoint` (smallest dart of the marked vertex), `sign`
//! (+1 or -1) and `seed`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bijection::Sign;
use crate::labeling::LabeledMap;
use crate::map_core::{MapError, RotationMap};
use crate::quad_map::PointedQuad;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: field `{field}`: {message}")]
    Field {
        line: usize,
        field: &'static str,
        message: String,
    },
    #[error("line {line}: {source}")]
    Map { line: usize, source: MapError },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapRecord {
    pub n_darts: usize,
    pub sigma: Vec<usize>,
    pub alpha: Vec<usize>,
    pub root: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Dart renaming under which edge `k` owns darts `2k, 2k + 1`: edges are
/// ordered by their smaller dart, which comes first.
pub fn pairing_relabeling(m: &RotationMap) -> Vec<usize> {
    let mut perm = vec![usize::MAX; m.n_darts()];
    let mut next = 0;
    for d in 0..m.n_darts() {
        if perm[d] == usize::MAX {
            perm[d] = next;
            perm[m.alpha(d)] = next + 1;
            next += 2;
        }
    }
    perm
}

impl MapRecord {
    /// Record of `m`, renumbered so that `alpha` pairs consecutive darts.
    pub fn from_map(m: &RotationMap) -> Self {
        let m = m.relabel(&pairing_relabeling(m)).expect("valid dart permutation");
        MapRecord {
            n_darts: m.n_darts(),
            sigma: m.sigma_slice().iter().map(|x| x + 1).collect(),
            alpha: m.alpha_slice().iter().map(|x| x + 1).collect(),
            root: m.root() + 1,
            labels: None,
            basepoint: None,
            sign: None,
            seed: None,
        }
    }

    pub fn from_labeled(t: &LabeledMap) -> Self {
        let t = t.relabel(&pairing_relabeling(&t.map));
        MapRecord {
            labels: Some(t.labels.clone()),
            ..Self::from_map(&t.map)
        }
    }

    pub fn from_pointed(pq: &PointedQuad) -> Self {
        let perm = pairing_relabeling(&pq.quad);
        let quad = pq.quad.relabel(&perm).expect("valid dart permutation");
        let dart = perm[pq.quad.vertices().cycles[pq.basepoint][0]];
        let rep = quad.vertices().cycles[quad.vertex_of()[dart]][0];
        MapRecord {
            basepoint: Some(rep + 1),
            ..Self::from_map(&quad)
        }
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = Some(sign.as_i8() as i64);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    fn field(&self, line: usize, field: &'static str, message: impl Into<String>) -> FormatError {
        FormatError::Field {
            line,
            field,
            message: message.into(),
        }
    }

    fn zero_based(&self, line: usize, field: &'static str, v: &[usize]) -> Result<Vec<usize>, FormatError> {
        if v.len() != self.n_darts {
            return Err(self.field(line, field, format!("expected {} entries, found {}", self.n_darts, v.len())));
        }
        v.iter()
            .map(|&x| {
                if x == 0 || x > self.n_darts {
                    Err(self.field(line, field, format!("dart {x} outside 1..={}", self.n_darts)))
                } else {
                    Ok(x - 1)
                }
            })
            .collect()
    }

    /// The map; `line` is used in error messages.
    pub fn to_map(&self, line: usize) -> Result<RotationMap, FormatError> {
        let sigma = self.zero_based(line, "sigma", &self.sigma)?;
        let alpha = self.zero_based(line, "alpha", &self.alpha)?;
        if self.root == 0 || self.root > self.n_darts {
            return Err(self.field(line, "root", format!("dart {} outside 1..={}", self.root, self.n_darts)));
        }
        RotationMap::new(sigma, alpha, self.root - 1).map_err(|source| FormatError::Map { line, source })
    }

    pub fn to_labeled(&self, line: usize) -> Result<LabeledMap, FormatError> {
        let map = self.to_map(line)?;
        let Some(labels) = &self.labels else {
            return Err(self.field(line, "labels", "missing"));
        };
        LabeledMap::new(map, labels.clone()).map_err(|e| self.field(line, "labels", e.to_string()))
    }

    pub fn to_pointed(&self, line: usize) -> Result<PointedQuad, FormatError> {
        let quad = self.to_map(line)?;
        let Some(b) = self.basepoint else {
            return Err(self.field(line, "basepoint", "missing"));
        };
        if b == 0 || b > self.n_darts {
            return Err(self.field(line, "basepoint", format!("dart {b} outside 1..={}", self.n_darts)));
        }
        let basepoint = quad.vertex_of()[b - 1];
        Ok(PointedQuad { quad, basepoint })
    }

    pub fn sign_value(&self, line: usize) -> Result<Option<Sign>, FormatError> {
        match self.sign {
            None => Ok(None),
            Some(s) => Sign::from_i64(s)
                .map(Some)
                .ok_or_else(|| self.field(line, "sign", format!("expected 1 or -1, found {s}"))),
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Parses one record per non-blank line; lines are numbered from 1.
pub fn parse_records(text: &str) -> Result<Vec<(usize, MapRecord)>, FormatError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map(|r| (i + 1, r))
                .map_err(|e| FormatError::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_core::examples::*;

    #[test]
    fn roundtrip_map() {
        let m = figure_eight_torus();
        let line = MapRecord::from_map(&m).to_line();
        assert_eq!(line, r#"{"n_darts":4,"sigma":[3,4,2,1],"alpha":[2,1,4,3],"root":1}"#);
        let recs = parse_records(&format!("{line}\n\n{line}\n")).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].0, 3);
        assert_eq!(recs[0].1.to_map(1).unwrap(), m);
    }

    #[test]
    fn roundtrip_labeled_and_pointed() {
        let t = LabeledMap::new(path3(), vec![1, 2, 1]).unwrap();
        let r = MapRecord::from_labeled(&t).with_sign(Sign::Minus).with_seed(3);
        let back: MapRecord = serde_json::from_str(&r.to_line()).unwrap();
        assert_eq!(back.to_labeled(1).unwrap(), t);
        assert_eq!(back.sign_value(1).unwrap(), Some(Sign::Minus));
        let pq = PointedQuad {
            quad: cycle(4),
            basepoint: 2,
        };
        let back = MapRecord::from_pointed(&pq);
        assert_eq!(back.to_pointed(1).unwrap(), pq);
    }

    #[test]
    fn serialized_edges_own_consecutive_darts() {
        let t = crate::sampler::sample_embedded_tree(12, 1);
        let r = MapRecord::from_labeled(&t);
        assert!(r.alpha.iter().enumerate().all(|(i, &a)| a - 1 == (i ^ 1)));
        let back = r.to_labeled(1).unwrap();
        assert_eq!(back.canonical_form(), t.canonical_form());
        let pq = crate::sampler::sample_quadrangulation(9, 2).unwrap().quad;
        let back = MapRecord::from_pointed(&pq).to_pointed(1).unwrap();
        assert_eq!(back.canonical_form(), pq.canonical_form());
    }

    #[test]
    fn errors_name_line_and_field() {
        let err = parse_records("{\"n_darts\":2}").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 1, .. }));
        let r: MapRecord = serde_json::from_str(r#"{"n_darts":2,"sigma":[1,3],"alpha":[2,1],"root":1}"#).unwrap();
        let err = r.to_map(4).unwrap_err();
        assert!(err.to_string().contains("line 4: field `sigma`"));
        let r: MapRecord = serde_json::from_str(r#"{"n_darts":2,"sigma":[1,1],"alpha":[2,1],"root":1}"#).unwrap();
        assert!(matches!(r.to_map(1), Err(FormatError::Map { line: 1, .. })));
    }
}
