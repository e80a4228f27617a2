use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CoveringLattice, VertexKind};
use crate::error::{Error, Result};
use crate::weights::check_angle;

/// Square lattice patch of `rows × cols` spins.
///
/// Spin `(i, j)` sits at covering coordinates `(u, v) = (i - j, i + j)` on the
/// oblique grid spanned by `1` and `e^{iα}`. Edges from row `i` to `i + 1`
/// (the y-direction) are diagonals of α-rhombi, edges from column `j` to
/// `j + 1` of (π−α)-rhombi. Spin ids follow row-major order.
pub fn build_square_covering(rows: usize, cols: usize, alpha: f64) -> Result<CoveringLattice> {
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidLattice(format!(
            "square patch needs rows, cols >= 2, got {rows}x{cols}"
        )));
    }
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::InvalidAngle(alpha));
    }
    let b = Complex64::from_polar(1.0, alpha);
    let mut points = Vec::new();
    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    let mut site = |u: i64, v: i64, points: &mut Vec<(VertexKind, Complex64)>| -> usize {
        *index.entry((u, v)).or_insert_with(|| {
            let kind = if (u + v).rem_euclid(2) == 0 {
                VertexKind::Primal
            } else {
                VertexKind::Dual
            };
            points.push((kind, u as f64 + v as f64 * b));
            points.len() - 1
        })
    };
    for i in 0..rows as i64 {
        for j in 0..cols as i64 {
            site(i - j, i + j, &mut points);
        }
    }
    let mut tiles = Vec::new();
    for i in 0..rows as i64 {
        for j in 0..cols as i64 {
            let (u, v) = (i - j, i + j);
            if i + 1 < rows as i64 {
                tiles.push([
                    site(u, v, &mut points),
                    site(u + 1, v, &mut points),
                    site(u + 1, v + 1, &mut points),
                    site(u, v + 1, &mut points),
                ]);
            }
            if j + 1 < cols as i64 {
                tiles.push([
                    site(u, v, &mut points),
                    site(u, v + 1, &mut points),
                    site(u - 1, v + 1, &mut points),
                    site(u - 1, v, &mut points),
                ]);
            }
        }
    }
    CoveringLattice::from_tiles(&points, &tiles)
}

/// Triangular lattice patch on the `(size+1)²` sites of a parallelogram.
///
/// `alpha1` and `alpha2` are the rhombus angles of the edges along the two
/// lattice directions, `π - alpha1 - alpha2` that of the diagonal edges.
/// Triangles have unit circumradius and their dual vertices at the
/// circumcenters; a negative angle makes the opposite triangle angle obtuse
/// and its faces fold over their neighbours.
pub fn build_triangular_covering(size: usize, alpha1: f64, alpha2: f64) -> Result<CoveringLattice> {
    let (points, tiles) = triangular_tiles(size, alpha1, alpha2)?;
    CoveringLattice::from_tiles(&points, &tiles)
}

/// Honeycomb lattice: the triangular construction with spin and disorder roles exchanged.
///
/// Each face is the corresponding triangular face with primal and dual corners
/// swapped, so its primal opening angle is `π - α` of the triangular edge.
pub fn build_honeycomb_covering(size: usize, alpha1: f64, alpha2: f64) -> Result<CoveringLattice> {
    let (points, tiles) = triangular_tiles(size, alpha1, alpha2)?;
    let swapped: Vec<_> = points.into_iter().map(|(k, z)| (k.other(), z)).collect();
    CoveringLattice::from_tiles(&swapped, &tiles)
}

type Tiles = (Vec<(VertexKind, Complex64)>, Vec<[usize; 4]>);

fn triangular_tiles(size: usize, alpha1: f64, alpha2: f64) -> Result<Tiles> {
    if size < 1 {
        return Err(Error::InvalidLattice("triangular patch needs size >= 1".into()));
    }
    check_angle(alpha1)?;
    check_angle(alpha2)?;
    let alpha3 = PI - alpha1 - alpha2;
    check_angle(alpha3).map_err(|_| {
        Error::DegenerateGeometry(format!(
            "third angle π - {alpha1} - {alpha2} = {alpha3} is outside (-π, π) or zero"
        ))
    })?;
    // Triangle angles opposite each edge family.
    let a_y = (PI - alpha1) / 2.0;
    let a_x = (PI - alpha2) / 2.0;
    let a_o = (PI - alpha3) / 2.0;
    let e1 = Complex64::new(2.0 * a_y.sin(), 0.0);
    let e2 = Complex64::from_polar(2.0 * a_x.sin(), a_o);

    let side = size + 1;
    let mut points: Vec<(VertexKind, Complex64)> = Vec::new();
    for i in 0..side {
        for j in 0..side {
            points.push((VertexKind::Primal, i as f64 * e1 + j as f64 * e2));
        }
    }
    let p = |i: usize, j: usize| i * side + j;
    let mut up = HashMap::new();
    let mut down = HashMap::new();
    for i in 0..size {
        for j in 0..size {
            let [a, b, c] = [p(i, j), p(i + 1, j), p(i, j + 1)];
            points.push((VertexKind::Dual, circumcenter(points[a].1, points[b].1, points[c].1)?));
            up.insert((i, j), points.len() - 1);
            let [a, b, c] = [p(i + 1, j), p(i + 1, j + 1), p(i, j + 1)];
            points.push((VertexKind::Dual, circumcenter(points[a].1, points[b].1, points[c].1)?));
            down.insert((i, j), points.len() - 1);
        }
    }
    let get = |m: &HashMap<(usize, usize), usize>, i: isize, j: isize| {
        if i < 0 || j < 0 {
            None
        } else {
            m.get(&(i as usize, j as usize)).copied()
        }
    };
    let mut tiles = Vec::new();
    for i in 0..side {
        for j in 0..side {
            let (ii, jj) = (i as isize, j as isize);
            // [P1, right circumcenter, P2, left circumcenter]
            if i + 1 < side {
                if let (Some(l), Some(r)) = (get(&up, ii, jj), get(&down, ii, jj - 1)) {
                    tiles.push([p(i, j), r, p(i + 1, j), l]);
                }
            }
            if j + 1 < side {
                if let (Some(r), Some(l)) = (get(&up, ii, jj), get(&down, ii - 1, jj)) {
                    tiles.push([p(i, j), r, p(i, j + 1), l]);
                }
            }
            if i + 1 < side && j + 1 < side {
                if let (Some(l), Some(r)) = (get(&up, ii, jj), get(&down, ii, jj)) {
                    tiles.push([p(i + 1, j), r, p(i, j + 1), l]);
                }
            }
        }
    }
    Ok((points, tiles))
}

fn circumcenter(a: Complex64, b: Complex64, c: Complex64) -> Result<Complex64> {
    let (b, c) = (b - a, c - a);
    let d = 2.0 * (b.re * c.im - b.im * c.re);
    if d.abs() < 1e-14 {
        return Err(Error::DegenerateGeometry("collinear triangle".into()));
    }
    let (bb, cc) = (b.norm_sqr(), c.norm_sqr());
    let x = (c.im * bb - b.im * cc) / d;
    let y = (b.re * cc - c.re * bb) / d;
    Ok(a + Complex64::new(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sorted_alphas(lat: &CoveringLattice) -> Vec<f64> {
        let mut v: Vec<f64> = lat.faces().iter().map(|f| f.alpha).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn square_isotropic_thetas() {
        let lat = build_square_covering(2, 2, PI / 2.0).unwrap();
        assert_eq!(lat.faces().len(), 4);
        assert_eq!(lat.primal_count(), 4);
        for f in lat.faces() {
            for t in f.edge_thetas {
                assert!([-PI, -PI / 2.0, 0.0, PI / 2.0].iter().any(|v| (v - t).abs() < 1e-12));
            }
            assert_abs_diff_eq!(f.side_length(), 1.0, epsilon = 1e-12);
        }
        lat.check_invariants().unwrap();
        assert_eq!(lat.dual_count() - lat.boundary().len(), 1);
    }

    #[test]
    fn square_direction_angles() {
        let a = 0.9;
        let lat = build_square_covering(3, 4, a).unwrap();
        lat.check_invariants().unwrap();
        for e in lat.primal_edges() {
            let (i1, j1) = (e.p1.min(e.p2) / 4, e.p1.min(e.p2) % 4);
            let (i2, j2) = (e.p1.max(e.p2) / 4, e.p1.max(e.p2) % 4);
            let alpha = lat.face(e.face).alpha;
            if j1 == j2 {
                assert_eq!(i2, i1 + 1);
                assert_abs_diff_eq!(alpha, a, epsilon = 1e-12);
            } else {
                assert_eq!(i1, i2);
                assert_abs_diff_eq!(alpha, PI - a, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn square_transpose_congruence() {
        let a = 1.1;
        let l1 = build_square_covering(3, 4, a).unwrap();
        let l2 = build_square_covering(4, 3, PI - a).unwrap();
        let dists = |l: &CoveringLattice| {
            let z: Vec<Complex64> = l.ids_of(VertexKind::Primal).iter().map(|&i| l.vertex(i).z).collect();
            let mut d = Vec::new();
            for i in 0..z.len() {
                for j in i + 1..z.len() {
                    d.push((z[i] - z[j]).norm());
                }
            }
            d.sort_by(f64::total_cmp);
            d
        };
        for (x, y) in dists(&l1).iter().zip(dists(&l2)) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
        for (x, y) in sorted_alphas(&l1).iter().zip(sorted_alphas(&l2)) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn square_rejects_bad_input() {
        assert!(build_square_covering(1, 3, 1.0).is_err());
        assert!(build_square_covering(3, 3, 0.0).is_err());
        assert!(build_square_covering(3, 3, PI).is_err());
        assert!(build_square_covering(3, 3, -0.5).is_err());
    }

    #[test]
    fn triangular_isotropic() {
        let lat = build_triangular_covering(2, PI / 3.0, PI / 3.0).unwrap();
        lat.check_invariants().unwrap();
        for f in lat.faces() {
            assert_abs_diff_eq!(f.alpha, PI / 3.0, epsilon = 1e-12);
            assert_abs_diff_eq!(f.side_length(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn triangular_circumcenters() {
        let lat = build_triangular_covering(3, 1.2, 0.7).unwrap();
        lat.check_invariants().unwrap();
        for d in lat.ids_of(VertexKind::Dual) {
            let zd = lat.vertex(d).z;
            for &(p, dd) in lat.edges() {
                if dd == d {
                    assert_abs_diff_eq!((lat.vertex(p).z - zd).norm(), 1.0, epsilon = 1e-12);
                }
            }
        }
        let mut want = [1.2, 0.7, PI - 1.9];
        want.sort_by(f64::total_cmp);
        let mut got: Vec<f64> = sorted_alphas(&lat);
        got.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert_eq!(got.len(), 3);
        for (g, w) in got.iter().zip(want) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-12);
        }
    }

    #[test]
    fn triangular_obtuse_folds() {
        let eps = 0.1;
        let lat = build_triangular_covering(2, PI / 2.0 + eps, PI / 2.0 + eps).unwrap();
        let negatives: Vec<f64> = lat.faces().iter().map(|f| f.alpha).filter(|a| *a < 0.0).collect();
        assert!(!negatives.is_empty());
        for a in negatives {
            assert_abs_diff_eq!(a, -2.0 * eps, epsilon = 1e-12);
        }
        for f in lat.faces() {
            assert!(f.is_rhombus());
        }
        assert!(build_triangular_covering(2, 1.5, PI - 1.5).is_err());
    }

    #[test]
    fn honeycomb_is_dual() {
        let hex = build_honeycomb_covering(2, PI / 3.0, PI / 3.0).unwrap();
        hex.check_invariants().unwrap();
        for f in hex.faces() {
            assert_abs_diff_eq!(f.alpha, 2.0 * PI / 3.0, epsilon = 1e-12);
        }
        let tri = build_triangular_covering(2, PI / 2.0, PI / 4.0).unwrap();
        let hex = build_honeycomb_covering(2, PI / 2.0, PI / 4.0).unwrap();
        hex.check_invariants().unwrap();
        assert_eq!(tri.faces().len(), hex.faces().len());
        for (t, h) in tri.faces().iter().zip(hex.faces()) {
            assert_abs_diff_eq!(h.alpha, PI - t.alpha, epsilon = 1e-12);
            let mut a: Vec<_> = t.points().iter().map(|z| (z.re, z.im)).collect();
            let mut b: Vec<_> = h.points().iter().map(|z| (z.re, z.im)).collect();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            b.sort_by(|x, y| x.partial_cmp(y).unwrap());
            assert_eq!(a, b);
        }
    }
}
