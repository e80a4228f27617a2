use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CoveringLattice, VertexKind};
use crate::error::{Error, Result};

/// A family of `M` grids of parallel lines, the input of the de Bruijn construction.
///
/// Family `j` consists of the lines `Re(z e^{-iφ_j}) + γ_j = k` for integer
/// `k` in `[-extent, extent]`. Every pair of families crosses exactly once
/// per pair of lines, so each crossing becomes one rhombus of the tiling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineArrangement {
    pub angles: Vec<f64>,
    pub offsets: Vec<f64>,
    pub extent: u32,
}

impl LineArrangement {
    pub fn new(angles: Vec<f64>, offsets: Vec<f64>, extent: u32) -> Result<Self> {
        let arr = Self {
            angles,
            offsets,
            extent,
        };
        arr.validate()?;
        Ok(arr)
    }

    /// `m` families at equal angular spacing `π/m` with generic offsets.
    pub fn regular(m: usize, extent: u32) -> Result<Self> {
        let angles = (0..m).map(|j| j as f64 * PI / m as f64).collect();
        let offsets = (0..m)
            .map(|j| (0.1 + 0.618_033_988_749_895 * (j + 1) as f64).fract() - 0.5)
            .collect();
        Self::new(angles, offsets, extent)
    }

    pub fn families(&self) -> usize {
        self.angles.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.angles.len();
        if m < 2 {
            return Err(Error::NotSimple(format!("need at least two families, got {m}")));
        }
        if self.offsets.len() != m {
            return Err(Error::NotSimple(format!(
                "{m} angles but {} offsets",
                self.offsets.len()
            )));
        }
        if self.angles.iter().chain(&self.offsets).any(|v| !v.is_finite()) {
            return Err(Error::NotSimple("non-finite angle or offset".into()));
        }
        for i in 0..m {
            for j in i + 1..m {
                let d = (self.angles[i] - self.angles[j]).rem_euclid(PI);
                if d.min(PI - d) < 1e-9 {
                    return Err(Error::NotSimple(format!(
                        "families {i} and {j} are parallel"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// de Bruijn dual of a line arrangement: a rhombic tiling with unit sides.
///
/// Vertices are the integer index vectors `K` of the arrangement's cells,
/// placed at `Σ_j K_j e^{iφ_j}`; the parity of `Σ_j K_j` picks primal or dual.
pub fn build_multigrid_tiling(arr: &LineArrangement) -> Result<CoveringLattice> {
    arr.validate()?;
    let m = arr.families();
    let e = arr.extent as i64;
    let normals: Vec<Complex64> = arr.angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut points: Vec<(VertexKind, Complex64)> = Vec::new();
    let mut vertex = |key: Vec<i64>, points: &mut Vec<(VertexKind, Complex64)>| -> usize {
        if let Some(&i) = index.get(&key) {
            return i;
        }
        let z: Complex64 = key.iter().zip(&normals).map(|(&k, n)| k as f64 * n).sum();
        let kind = if key.iter().sum::<i64>().rem_euclid(2) == 0 {
            VertexKind::Primal
        } else {
            VertexKind::Dual
        };
        points.push((kind, z));
        index.insert(key, points.len() - 1);
        points.len() - 1
    };
    let mut tiles = Vec::new();
    for j in 0..m {
        for l in j + 1..m {
            let (nj, nl) = (normals[j], normals[l]);
            let det = nj.re * nl.im - nj.im * nl.re;
            for kj in -e..=e {
                for kl in -e..=e {
                    let cj = kj as f64 - arr.offsets[j];
                    let cl = kl as f64 - arr.offsets[l];
                    let z = Complex64::new((cj * nl.im - cl * nj.im) / det, (nj.re * cl - nl.re * cj) / det);
                    let mut key = Vec::with_capacity(m);
                    for (i, ni) in normals.iter().enumerate() {
                        if i == j {
                            key.push(kj);
                        } else if i == l {
                            key.push(kl);
                        } else {
                            let t = z.re * ni.re + z.im * ni.im + arr.offsets[i];
                            let r = t.round();
                            if (t - r).abs() < 1e-9 && r.abs() <= e as f64 {
                                return Err(Error::TriplePoint { x: z.re, y: z.im });
                            }
                            key.push((t.ceil() as i64).clamp(-e, e + 1));
                        }
                    }
                    let mut corner = |dj: i64, dl: i64| {
                        let mut k = key.clone();
                        k[j] += dj;
                        k[l] += dl;
                        vertex(k, &mut points)
                    };
                    let quad = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
                    if det > 0.0 {
                        tiles.push(quad);
                    } else {
                        tiles.push([quad[0], quad[3], quad[2], quad[1]]);
                    }
                }
            }
        }
    }
    CoveringLattice::from_tiles(&points, &tiles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_families_give_square_covering() {
        let arr = LineArrangement::new(vec![0.0, PI / 2.0], vec![0.3, 0.2], 1).unwrap();
        let lat = build_multigrid_tiling(&arr).unwrap();
        lat.check_invariants().unwrap();
        assert_eq!(lat.faces().len(), 9);
        for f in lat.faces() {
            assert_abs_diff_eq!(f.alpha.abs(), PI / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn three_families_make_a_hexagon() {
        let arr = LineArrangement::new(vec![0.0, PI / 3.0, 2.0 * PI / 3.0], vec![0.1, 0.2, 0.3], 0).unwrap();
        let lat = build_multigrid_tiling(&arr).unwrap();
        lat.check_invariants().unwrap();
        assert_eq!(lat.faces().len(), 3);
        assert_eq!(lat.vertices().len(), 7);
    }

    #[test]
    fn penrose_like() {
        let lat = build_multigrid_tiling(&LineArrangement::regular(5, 2).unwrap()).unwrap();
        lat.check_invariants().unwrap();
        assert_eq!(lat.faces().len(), 10 * 25);
        for &(p, d) in lat.edges() {
            assert_abs_diff_eq!((lat.vertex(p).z - lat.vertex(d).z).norm(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn rejects_parallel_and_triple_points() {
        assert!(LineArrangement::new(vec![0.0, PI], vec![0.0, 0.0], 1).is_err());
        assert!(LineArrangement::new(vec![0.0], vec![0.0], 1).is_err());
        let arr = LineArrangement::new(vec![0.0, PI / 3.0, 2.0 * PI / 3.0], vec![0.0, 0.0, 0.0], 1).unwrap();
        assert!(matches!(build_multigrid_tiling(&arr), Err(Error::TriplePoint { .. })));
    }
}
