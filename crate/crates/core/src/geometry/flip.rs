use std::collections::BTreeSet;

use num_complex::Complex64;

use super::{CoveringLattice, VertexKind, VertexRecord};
use crate::error::{Error, Result};

/// Vertices of degree three whose three faces close around them, as face triples.
pub fn find_flippable_hexagons(lat: &CoveringLattice) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for v in lat.vertices() {
        let faces = lat.faces_at(v.id);
        if faces.len() == 3 {
            let hex = [faces[0], faces[1], faces[2]];
            if hexagon_centre(lat, hex).is_ok() {
                out.push(hex);
            }
        }
    }
    out
}

/// Retiles the hexagon covered by three faces meeting at one inner vertex.
///
/// The inner vertex `v` is replaced by its reflection through the hexagon's
/// centre, which keeps the vertex id but takes the opposite kind, so the
/// primal vertex count changes by one. Untouched faces keep their order and
/// weights; the three new faces are appended without weights.
pub fn hexagon_flip(lat: &CoveringLattice, hexagon: [usize; 3]) -> Result<CoveringLattice> {
    let (v, ring) = hexagon_centre(lat, hexagon)?;
    let zv = lat.vertex(v).z;
    let centre: Complex64 = ring.iter().map(|&h| lat.vertex(h).z).sum::<Complex64>() / 6.0;
    let mut vertices: Vec<VertexRecord> = lat.vertices().to_vec();
    let new_kind = lat.vertex(v).kind.other();
    vertices[v] = VertexRecord::new(v, new_kind, 2.0 * centre - zv);

    let adjacent: BTreeSet<usize> = lat
        .edges()
        .iter()
        .filter_map(|&(p, d)| {
            if p == v {
                Some(d)
            } else if d == v {
                Some(p)
            } else {
                None
            }
        })
        .collect();
    let start = (0..6)
        .find(|&o| !adjacent.contains(&ring[o]))
        .ok_or_else(|| Error::NotFlippable("hexagon ring is fully adjacent".into()))?;

    let mut corners: Vec<[usize; 4]> = Vec::new();
    let mut kept = Vec::new();
    for (i, f) in lat.faces().iter().enumerate() {
        if !hexagon.contains(&i) {
            corners.push(f.ids());
            kept.push(i);
        }
    }
    for s in 0..3 {
        let o = start + 2 * s;
        let quad = [v, ring[o % 6], ring[(o + 1) % 6], ring[(o + 2) % 6]];
        let quad = if new_kind == VertexKind::Primal {
            quad
        } else {
            [quad[1], quad[2], quad[3], quad[0]]
        };
        corners.push(quad);
    }
    let mut boundary = lat.boundary().clone();
    boundary.remove(&v);
    let mut out = CoveringLattice::from_faces(vertices, &corners, Some(boundary))
        .map_err(|e| Error::NotFlippable(format!("retiled hexagon is not rhombic: {e}")))?;
    for (new, &old) in kept.iter().enumerate() {
        if let Some(w) = &lat.primal_edges()[old].weights {
            out.set_weights(new, w.clone());
        }
    }
    Ok(out)
}

/// The shared inner vertex and the six ring vertices in counterclockwise order.
fn hexagon_centre(lat: &CoveringLattice, hexagon: [usize; 3]) -> Result<(usize, [usize; 6])> {
    let n = lat.faces().len();
    if hexagon.iter().any(|&f| f >= n) {
        return Err(Error::NotFlippable("face index out of range".into()));
    }
    if hexagon[0] == hexagon[1] || hexagon[1] == hexagon[2] || hexagon[0] == hexagon[2] {
        return Err(Error::NotFlippable("faces must be distinct".into()));
    }
    let sets: Vec<BTreeSet<usize>> = hexagon
        .iter()
        .map(|&f| lat.face(f).ids().into_iter().collect())
        .collect();
    let common: Vec<usize> = sets[0]
        .iter()
        .filter(|x| sets[1].contains(x) && sets[2].contains(x))
        .copied()
        .collect();
    if common.len() != 1 {
        return Err(Error::NotFlippable(format!(
            "faces share {} vertices, expected one",
            common.len()
        )));
    }
    let v = common[0];
    let around = lat.faces_at(v);
    if around.len() != 3 {
        return Err(Error::NotFlippable(format!(
            "inner vertex {v} meets {} faces, expected three",
            around.len()
        )));
    }
    let mut ring: Vec<usize> = sets
        .iter()
        .flatten()
        .copied()
        .filter(|&x| x != v)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if ring.len() != 6 {
        return Err(Error::NotFlippable(format!(
            "faces span {} outer vertices, expected six",
            ring.len()
        )));
    }
    if lat.faces().iter().enumerate().any(|(i, f)| hexagon.contains(&i) && f.alpha < 0.0) {
        return Err(Error::NotFlippable("folded faces cannot be flipped".into()));
    }
    let centre: Complex64 = ring.iter().map(|&h| lat.vertex(h).z).sum::<Complex64>() / 6.0;
    ring.sort_by(|&a, &b| {
        let ta = (lat.vertex(a).z - centre).arg();
        let tb = (lat.vertex(b).z - centre).arg();
        ta.total_cmp(&tb)
    });
    for k in 0..6 {
        if lat.vertex(ring[k]).kind == lat.vertex(ring[(k + 1) % 6]).kind {
            return Err(Error::NotFlippable("ring kinds do not alternate".into()));
        }
    }
    Ok((v, [ring[0], ring[1], ring[2], ring[3], ring[4], ring[5]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_multigrid_tiling, LineArrangement};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn hexagon() -> CoveringLattice {
        let arr = LineArrangement::new(vec![0.0, PI / 3.0, 2.0 * PI / 3.0], vec![0.1, 0.2, 0.3], 0).unwrap();
        build_multigrid_tiling(&arr).unwrap()
    }

    fn shapes(lat: &CoveringLattice) -> Vec<f64> {
        let mut v: Vec<f64> = lat.faces().iter().map(|f| f.alpha.abs().min(PI - f.alpha.abs())).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn flip_is_an_involution() {
        let lat = hexagon();
        let hexes = find_flippable_hexagons(&lat);
        assert_eq!(hexes.len(), 1);
        let once = hexagon_flip(&lat, hexes[0]).unwrap();
        once.check_invariants().unwrap();
        assert_eq!(
            (once.primal_count() as i64 - lat.primal_count() as i64).abs(),
            1
        );
        for (a, b) in shapes(&lat).iter().zip(shapes(&once)) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        let twice = hexagon_flip(&once, find_flippable_hexagons(&once)[0]).unwrap();
        assert_eq!(twice.primal_count(), lat.primal_count());
        for (a, b) in lat.vertices().iter().zip(twice.vertices()) {
            assert_eq!(a.kind, b.kind);
            assert_abs_diff_eq!((a.z - b.z).norm(), 0.0, epsilon = 1e-12);
        }
        let faces = |l: &CoveringLattice| {
            l.faces()
                .iter()
                .map(|f| f.ids().into_iter().collect::<BTreeSet<_>>())
                .collect::<BTreeSet<_>>()
        };
        assert_eq!(faces(&lat), faces(&twice));
    }

    #[test]
    fn rejects_non_hexagon() {
        let lat = crate::geometry::build_square_covering(3, 3, PI / 2.0).unwrap();
        assert!(hexagon_flip(&lat, [0, 1, 2]).is_err());
        assert!(find_flippable_hexagons(&lat).is_empty());
    }
}
