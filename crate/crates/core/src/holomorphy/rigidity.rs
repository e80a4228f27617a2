use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::solver::solve_face;
use crate::clock::SectorIndex;
use crate::error::Result;
use crate::geometry::{reference_rhombus, RhombusGeometry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityRow {
    pub alpha: f64,
    pub perturbation: f64,
    /// Combined least-squares residual of the α-face and (π−α)-face systems.
    pub residual_of_fit: f64,
    pub solvable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub n: u32,
    pub m: u32,
    pub rows: Vec<RigidityRow>,
}

impl RigidityReport {
    /// Smallest residual among rows with the given perturbation.
    pub fn min_residual_at(&self, perturbation: f64) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| (r.perturbation - perturbation).abs() < 1e-15)
            .map(|r| r.residual_of_fit)
            .reduce(f64::min)
    }
}

/// The face with dual corner `D1` pushed radially away from the centre by a
/// factor `1 + eps`: a kite whose two sides at `D1` are longer than the others.
pub fn kite(face: &RhombusGeometry, eps: f64) -> Result<RhombusGeometry> {
    let mut c = face.corners;
    let centre = face.center();
    c[1].z = centre + (c[1].z - centre) * (1.0 + eps);
    RhombusGeometry::quadrilateral(c)
}

/// Solvability of the weight equations on kite deformations of the rhombic faces.
pub fn quadrilateral_rigidity_check(
    sector: SectorIndex,
    alphas: &[f64],
    perturbations: &[f64],
) -> Result<RigidityReport> {
    let mut rows = Vec::new();
    for &alpha in alphas {
        for &eps in perturbations {
            let mut total = 0.0;
            let mut solvable = true;
            for a in [alpha, PI - alpha] {
                let face = kite(&reference_rhombus(a)?, eps)?;
                let sol = solve_face(&face, sector)?;
                total += sol.residual_of_fit * sol.residual_of_fit;
                solvable &= sol.exists();
            }
            rows.push(RigidityRow {
                alpha,
                perturbation: eps,
                residual_of_fit: total.sqrt(),
                solvable,
            });
        }
    }
    Ok(RigidityReport {
        n: sector.modulus(),
        m: sector.m(),
        rows,
    })
}
