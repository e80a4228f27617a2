use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CoveringLattice, VertexKind, VertexRecord};
use crate::error::{Error, Result};
use crate::weights::WeightVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: usize,
    pub kind: VertexKind,
    pub re: f64,
    pub im: f64,
}

/// A disorder string as stored on disk: sector and dual path from anchor to boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringEntry {
    pub sector: u32,
    pub path: Vec<usize>,
}

/// On-disk lattice format.
///
/// `faces` lists `[p1, d1, p2, d2]` per primal edge and is optional; without
/// it each face is oriented counterclockwise in the plane, which loses the
/// orientation of folded faces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[usize; 2]>,
    pub primal_edges: Vec<[usize; 2]>,
    pub boundary: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<[usize; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightVector>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strings: Vec<StringEntry>,
}

impl LatticeFile {
    pub fn from_lattice(lat: &CoveringLattice) -> Self {
        let weights: Option<Vec<WeightVector>> = lat
            .primal_edges()
            .iter()
            .map(|e| e.weights.clone())
            .collect();
        Self {
            vertices: lat
                .vertices()
                .iter()
                .map(|v| VertexEntry {
                    id: v.id,
                    kind: v.kind,
                    re: v.z.re,
                    im: v.z.im,
                })
                .collect(),
            edges: lat.edges().iter().map(|&(p, d)| [p, d]).collect(),
            primal_edges: lat.primal_edges().iter().map(|e| [e.p1, e.p2]).collect(),
            boundary: lat.boundary().iter().copied().collect(),
            faces: Some(lat.faces().iter().map(|f| f.ids()).collect()),
            weights,
            strings: Vec::new(),
        }
    }

    /// Rebuilds and validates the lattice.
    pub fn to_lattice(&self) -> Result<CoveringLattice> {
        let mut vertices: Vec<VertexRecord> = self
            .vertices
            .iter()
            .map(|v| VertexRecord::new(v.id, v.kind, Complex64::new(v.re, v.im)))
            .collect();
        vertices.sort_by_key(|v| v.id);
        let n = vertices.len();
        for &[p, d] in &self.edges {
            if p >= n || d >= n {
                return Err(Error::InvalidLattice(format!("edge [{p}, {d}] out of range")));
            }
            if vertices[p].kind != VertexKind::Primal || vertices[d].kind != VertexKind::Dual {
                return Err(Error::InvalidLattice(format!(
                    "edge [{p}, {d}] must join a primal and a dual vertex"
                )));
            }
        }
        let corners = match &self.faces {
            Some(f) => {
                if f.len() != self.primal_edges.len() {
                    return Err(Error::InvalidLattice("faces and primal_edges differ in length".into()));
                }
                for (i, (c, e)) in f.iter().zip(&self.primal_edges).enumerate() {
                    if [c[0], c[2]] != *e {
                        return Err(Error::InvalidLattice(format!(
                            "face {i} does not span primal edge {e:?}"
                        )));
                    }
                }
                f.clone()
            }
            None => self.faces_from_edges(&vertices)?,
        };
        let boundary: BTreeSet<usize> = self.boundary.iter().copied().collect();
        let mut lat = CoveringLattice::from_faces(vertices, &corners, Some(boundary))?;
        let listed: BTreeSet<(usize, usize)> = self.edges.iter().map(|&[p, d]| (p, d)).collect();
        let derived: BTreeSet<(usize, usize)> = lat.edges().iter().copied().collect();
        if listed != derived {
            return Err(Error::InvalidLattice(
                "covering edges do not match the face boundaries".into(),
            ));
        }
        if let Some(ws) = &self.weights {
            if ws.len() != lat.primal_edges().len() {
                return Err(Error::InvalidLattice("one weight vector per primal edge expected".into()));
            }
            for (i, w) in ws.iter().enumerate() {
                lat.set_weights(i, w.clone());
            }
        }
        lat.check_invariants()?;
        Ok(lat)
    }

    /// Each primal edge's face from its two common dual neighbours, oriented counterclockwise.
    fn faces_from_edges(&self, vertices: &[VertexRecord]) -> Result<Vec<[usize; 4]>> {
        let mut nbrs: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &[p, d] in &self.edges {
            nbrs.entry(p).or_default().insert(d);
        }
        let empty = BTreeSet::new();
        let mut out = Vec::with_capacity(self.primal_edges.len());
        for &[p1, p2] in &self.primal_edges {
            let a = nbrs.get(&p1).unwrap_or(&empty);
            let b = nbrs.get(&p2).unwrap_or(&empty);
            let common: Vec<usize> = a.intersection(b).copied().collect();
            if common.len() != 2 {
                return Err(Error::InvalidLattice(format!(
                    "primal edge [{p1}, {p2}] has {} common dual neighbours, expected 2",
                    common.len()
                )));
            }
            let dir = vertices[p2].z - vertices[p1].z;
            let w = vertices[common[0]].z - vertices[p1].z;
            let right_first = dir.re * w.im - dir.im * w.re < 0.0;
            let (d1, d2) = if right_first {
                (common[0], common[1])
            } else {
                (common[1], common[0])
            };
            out.push([p1, d1, p2, d2]);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

impl CoveringLattice {
    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        LatticeFile::from_lattice(self).save(path)
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        LatticeFile::load(path)?.to_lattice()
    }
}
