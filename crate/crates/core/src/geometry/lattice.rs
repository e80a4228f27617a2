use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{theta_of, RhombusGeometry, VertexKind, VertexRecord};
use crate::error::{Error, Result};
use crate::tolerances;
use crate::weights::{fz_weights, WeightVector};

/// A spin-model edge: the primal diagonal of face `face`, from its `P1` to its `P2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimalEdge {
    pub p1: usize,
    pub p2: usize,
    pub face: usize,
    pub weights: Option<WeightVector>,
}

/// One step of a disorder string between adjacent dual vertices.
///
/// `sign = +1` when the step goes `D1 → D2` of `face` (the spin at `P1` is on
/// the left), `-1` for the reverse step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualStep {
    pub to: usize,
    pub face: usize,
    pub sign: i32,
}

/// Planar covering lattice with one rhombic face per primal edge.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringLattice {
    vertices: Vec<VertexRecord>,
    edges: Vec<(usize, usize)>,
    faces: Vec<RhombusGeometry>,
    primal_edges: Vec<PrimalEdge>,
    boundary: BTreeSet<usize>,
}

impl CoveringLattice {
    /// Builds a lattice from embedded points and tiles.
    ///
    /// Each tile lists its four corners in combinatorial counterclockwise order,
    /// alternating primal and dual, starting anywhere. Points not used by any
    /// tile are dropped and the rest renumbered in their original order.
    pub fn from_tiles(points: &[(VertexKind, Complex64)], tiles: &[[usize; 4]]) -> Result<Self> {
        let mut used = BTreeSet::new();
        for t in tiles {
            for &c in t {
                if c >= points.len() {
                    return Err(Error::InvalidLattice(format!("tile corner {c} out of range")));
                }
                used.insert(c);
            }
        }
        let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(id, &c)| (c, id)).collect();
        let vertices: Vec<VertexRecord> = used
            .iter()
            .enumerate()
            .map(|(id, &c)| VertexRecord::new(id, points[c].0, points[c].1))
            .collect();
        let corner_lists: Vec<[usize; 4]> = tiles
            .iter()
            .map(|t| {
                let t = t.map(|c| remap[&c]);
                if vertices[t[0]].kind == VertexKind::Primal {
                    t
                } else {
                    [t[1], t[2], t[3], t[0]]
                }
            })
            .collect();
        Self::from_faces(vertices, &corner_lists, None)
    }

    /// Builds a lattice from vertices and face corner lists `(P1, D1, P2, D2)`.
    ///
    /// When `boundary` is `None` the dual vertices with an open fan of faces
    /// are taken as the boundary.
    pub fn from_faces(
        vertices: Vec<VertexRecord>,
        corner_lists: &[[usize; 4]],
        boundary: Option<BTreeSet<usize>>,
    ) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if v.id != i {
                return Err(Error::InvalidLattice(format!("vertex {i} has id {}", v.id)));
            }
            if !v.z.re.is_finite() || !v.z.im.is_finite() {
                return Err(Error::InvalidLattice(format!("vertex {i} has non-finite position")));
            }
        }
        let mut faces = Vec::with_capacity(corner_lists.len());
        let mut primal_edges = Vec::with_capacity(corner_lists.len());
        let mut edge_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut seen_primal: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (fi, c) in corner_lists.iter().enumerate() {
            if c.iter().any(|&id| id >= vertices.len()) {
                return Err(Error::InvalidLattice(format!("face {fi} references a missing vertex")));
            }
            let face = RhombusGeometry::from_corners(c.map(|id| vertices[id]))
                .map_err(|e| Error::InvalidLattice(format!("face {fi}: {e}")))?;
            let key = (c[0].min(c[2]), c[0].max(c[2]));
            if !seen_primal.insert(key) {
                return Err(Error::InvalidLattice(format!(
                    "primal edge {key:?} appears in two faces"
                )));
            }
            for (p, d) in [(c[0], c[1]), (c[2], c[1]), (c[2], c[3]), (c[0], c[3])] {
                *edge_count.entry((p, d)).or_default() += 1;
            }
            primal_edges.push(PrimalEdge {
                p1: c[0],
                p2: c[2],
                face: fi,
                weights: None,
            });
            faces.push(face);
        }
        if let Some((e, n)) = edge_count.iter().find(|(_, &n)| n > 2) {
            return Err(Error::InvalidLattice(format!(
                "covering edge {e:?} is shared by {n} faces"
            )));
        }
        let open_duals: BTreeSet<usize> = edge_count
            .iter()
            .filter(|(_, &n)| n == 1)
            .map(|(&(_, d), _)| d)
            .collect();
        let boundary = match boundary {
            Some(b) => {
                for &d in &b {
                    if d >= vertices.len() || vertices[d].kind != VertexKind::Dual {
                        return Err(Error::InvalidLattice(format!(
                            "boundary vertex {d} is not a dual vertex"
                        )));
                    }
                }
                b
            }
            None => open_duals,
        };
        Ok(Self {
            vertices,
            edges: edge_count.into_keys().collect(),
            faces,
            primal_edges,
            boundary,
        })
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &VertexRecord {
        &self.vertices[id]
    }

    /// Covering edges as `(primal id, dual id)`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn faces(&self) -> &[RhombusGeometry] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &RhombusGeometry {
        &self.faces[i]
    }

    /// Primal edges; entry `i` is the diagonal of face `i`.
    pub fn primal_edges(&self) -> &[PrimalEdge] {
        &self.primal_edges
    }

    pub fn boundary(&self) -> &BTreeSet<usize> {
        &self.boundary
    }

    pub fn ids_of(&self, kind: VertexKind) -> Vec<usize> {
        self.vertices
            .iter()
            .filter(|v| v.kind == kind)
            .map(|v| v.id)
            .collect()
    }

    pub fn primal_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.kind == VertexKind::Primal)
            .count()
    }

    pub fn dual_count(&self) -> usize {
        self.vertices.len() - self.primal_count()
    }

    /// Replaces the boundary set.
    pub fn set_boundary(&mut self, boundary: BTreeSet<usize>) -> Result<()> {
        for &d in &boundary {
            if d >= self.vertices.len() || self.vertices[d].kind != VertexKind::Dual {
                return Err(Error::InvalidLattice(format!("{d} is not a dual vertex")));
            }
        }
        self.boundary = boundary;
        Ok(())
    }

    /// Sets every primal edge to `x_ck(α)` of its own face.
    pub fn assign_critical_weights(&mut self, n: i64) -> Result<()> {
        for e in &mut self.primal_edges {
            e.weights = Some(fz_weights(n, self.faces[e.face].alpha)?);
        }
        Ok(())
    }

    pub fn with_critical_weights(mut self, n: i64) -> Result<Self> {
        self.assign_critical_weights(n)?;
        Ok(self)
    }

    pub fn assign_uniform_weights(&mut self, w: &WeightVector) {
        for e in &mut self.primal_edges {
            e.weights = Some(w.clone());
        }
    }

    pub fn set_weights(&mut self, edge: usize, w: WeightVector) {
        self.primal_edges[edge].weights = Some(w);
    }

    /// Applies `f` to every assigned weight vector.
    pub fn map_weights(&mut self, mut f: impl FnMut(&WeightVector) -> Result<WeightVector>) -> Result<()> {
        for e in &mut self.primal_edges {
            if let Some(w) = &e.weights {
                e.weights = Some(f(w)?);
            }
        }
        Ok(())
    }

    /// The common modulus of all edge weights, if every edge has weights.
    pub fn weights_modulus(&self) -> Result<u32> {
        let mut n = None;
        for (i, e) in self.primal_edges.iter().enumerate() {
            let w = e.weights.as_ref().ok_or(Error::MissingWeights(i))?;
            match n {
                None => n = Some(w.n()),
                Some(m) if m != w.n() => {
                    return Err(Error::InvalidLattice(format!(
                        "edge {i} has N={} but earlier edges have N={m}",
                        w.n()
                    )))
                }
                _ => {}
            }
        }
        n.ok_or_else(|| Error::InvalidLattice("lattice has no edges".into()))
    }

    /// Dual vertices reachable in one string step, with the crossed face.
    pub fn dual_steps(&self, d: usize) -> Vec<DualStep> {
        let mut out = Vec::new();
        for (fi, f) in self.faces.iter().enumerate() {
            let (d1, d2) = f.dual_ids();
            if d1 == d {
                out.push(DualStep { to: d2, face: fi, sign: 1 });
            } else if d2 == d {
                out.push(DualStep { to: d1, face: fi, sign: -1 });
            }
        }
        out
    }

    /// Breadth-first dual path from `from` to the nearest boundary vertex (ties by id).
    pub fn path_to_boundary(&self, from: usize) -> Result<Vec<usize>> {
        self.path_to_boundary_avoiding(from, &BTreeSet::new())
    }

    /// As [`path_to_boundary`](Self::path_to_boundary) but never stepping through `avoid`.
    pub fn path_to_boundary_avoiding(&self, from: usize, avoid: &BTreeSet<usize>) -> Result<Vec<usize>> {
        if from >= self.vertices.len() || self.vertices[from].kind != VertexKind::Dual {
            return Err(Error::InvalidString(format!("{from} is not a dual vertex")));
        }
        let adjacency = self.dual_adjacency();
        let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(d) = queue.pop_front() {
            if self.boundary.contains(&d) {
                let mut path = vec![d];
                let mut cur = d;
                while let Some(&p) = prev.get(&cur) {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Ok(path);
            }
            for s in &adjacency[&d] {
                if !avoid.contains(&s.to) && seen.insert(s.to) {
                    prev.insert(s.to, d);
                    queue.push_back(s.to);
                }
            }
        }
        Err(Error::InvalidString(format!(
            "no dual path from {from} reaches the boundary"
        )))
    }

    pub(crate) fn dual_adjacency(&self) -> BTreeMap<usize, Vec<DualStep>> {
        let mut adj: BTreeMap<usize, Vec<DualStep>> = self
            .ids_of(VertexKind::Dual)
            .into_iter()
            .map(|d| (d, Vec::new()))
            .collect();
        for (fi, f) in self.faces.iter().enumerate() {
            let (d1, d2) = f.dual_ids();
            adj.get_mut(&d1).unwrap().push(DualStep { to: d2, face: fi, sign: 1 });
            adj.get_mut(&d2).unwrap().push(DualStep { to: d1, face: fi, sign: -1 });
        }
        adj
    }

    /// Faces incident to vertex `v`.
    pub fn faces_at(&self, v: usize) -> Vec<usize> {
        self.faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.ids().contains(&v))
            .map(|(i, _)| i)
            .collect()
    }

    /// Faces whose two dual corners are both off the boundary.
    pub fn interior_faces(&self) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| {
                let (d1, d2) = self.faces[i].dual_ids();
                !self.boundary.contains(&d1) && !self.boundary.contains(&d2)
            })
            .collect()
    }

    /// A copy with every position mapped through `f`.
    pub fn transformed(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        let vertices: Vec<VertexRecord> = self
            .vertices
            .iter()
            .map(|v| VertexRecord { z: f(v.z), ..*v })
            .collect();
        let corners: Vec<[usize; 4]> = self.faces.iter().map(|f| f.ids()).collect();
        let mut lat = Self::from_faces(vertices, &corners, Some(self.boundary.clone()))?;
        for (e, old) in lat.primal_edges.iter_mut().zip(&self.primal_edges) {
            e.weights = old.weights.clone();
        }
        Ok(lat)
    }

    /// Checks the structural invariants: rhombic faces, bipartite covering
    /// edges, stored angles, and (for unfolded lattices) non-overlapping faces.
    pub fn check_invariants(&self) -> Result<()> {
        for (i, f) in self.faces.iter().enumerate() {
            f.check_rhombus(tolerances::GEOMETRY)
                .map_err(|e| Error::InvalidLattice(format!("face {i}: {e}")))?;
            let [p1, d1, p2, d2] = f.points();
            let recomputed = [
                theta_of(d1 - p1),
                theta_of(d1 - p2),
                theta_of(d2 - p2),
                theta_of(d2 - p1),
            ];
            for (a, b) in recomputed.iter().zip(&f.edge_thetas) {
                if (a - b).abs() > 1e-12 {
                    return Err(Error::InvalidLattice(format!("face {i}: stale edge angle")));
                }
            }
        }
        for &(p, d) in &self.edges {
            if self.vertices[p].kind != VertexKind::Primal || self.vertices[d].kind != VertexKind::Dual {
                return Err(Error::InvalidLattice(format!("edge ({p},{d}) is not primal-dual")));
            }
        }
        if self.primal_edges.len() != self.faces.len() {
            return Err(Error::InvalidLattice("primal edges and faces differ in number".into()));
        }
        for (i, e) in self.primal_edges.iter().enumerate() {
            if e.face != i || self.faces[i].primal_ids() != (e.p1, e.p2) {
                return Err(Error::InvalidLattice(format!("primal edge {i} is not the diagonal of face {i}")));
            }
        }
        if self.faces.iter().all(|f| f.alpha > 0.0) {
            self.check_no_overlap()?;
        }
        Ok(())
    }

    /// Samples interior points of each face and checks no other face contains them.
    fn check_no_overlap(&self) -> Result<()> {
        let boxes: Vec<(f64, f64, f64, f64)> = self
            .faces
            .iter()
            .map(|f| {
                let pts = f.points();
                pts.iter().fold(
                    (f64::MAX, f64::MIN, f64::MAX, f64::MIN),
                    |(a, b, c, d), z| (a.min(z.re), b.max(z.re), c.min(z.im), d.max(z.im)),
                )
            })
            .collect();
        for (i, f) in self.faces.iter().enumerate() {
            let c = f.center();
            let samples: Vec<Complex64> = std::iter::once(c)
                .chain(f.points().iter().map(|&p| c + (p - c) * 0.9))
                .collect();
            for (j, g) in self.faces.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (x0, x1, y0, y1) = boxes[j];
                for &s in &samples {
                    if s.re < x0 || s.re > x1 || s.im < y0 || s.im > y1 {
                        continue;
                    }
                    if strictly_inside(g, s) {
                        return Err(Error::InvalidLattice(format!("faces {i} and {j} overlap")));
                    }
                }
            }
        }
        Ok(())
    }
}

fn strictly_inside(face: &RhombusGeometry, z: Complex64) -> bool {
    let pts = face.points();
    let eps = 1e-9 * face.side_length();
    (0..4).all(|k| {
        let a = pts[k];
        let b = pts[(k + 1) % 4];
        let e = b - a;
        let w = z - a;
        e.re * w.im - e.im * w.re > eps
    })
}
