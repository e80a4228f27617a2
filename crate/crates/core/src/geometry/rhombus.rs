use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{VertexKind, VertexRecord};
use crate::error::{Error, Result};
use crate::tolerances;

/// Wraps an angle to `[-π, π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let w = (t + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// `arg(z)` in `[-π, π)`.
pub fn theta_of(z: Complex64) -> f64 {
    wrap_angle(z.arg())
}

/// Principal argument of `a / b` in `(-π, π]`.
fn turn(a: Complex64, b: Complex64) -> f64 {
    (a / b).arg()
}

/// One quadrilateral face of the covering lattice.
///
/// Corners are `(P1, D1, P2, D2)` in combinatorial counterclockwise order. The
/// primal diagonal `P1 P2` is the spin-model edge, the dual diagonal `D1 D2` is
/// the step a disorder string takes across it (with `P1` on its left when going
/// from `D1` to `D2`). Edge quantities are indexed
/// `[(P1,D1), (P2,D1), (P2,D2), (P1,D2)]`, which is also the contour order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhombusGeometry {
    pub corners: [VertexRecord; 4],
    /// Signed opening angle at the primal corners; negative for folded faces.
    pub alpha: f64,
    /// `arg(z_dual - z_primal)` wrapped to `[-π, π)`.
    pub edge_thetas: [f64; 4],
    /// Directed sides `P1→D1, D1→P2, P2→D2, D2→P1`.
    pub edge_deltas: [Complex64; 4],
}

impl RhombusGeometry {
    /// Builds a validated rhombic face.
    pub fn from_corners(corners: [VertexRecord; 4]) -> Result<Self> {
        let face = Self::quadrilateral(corners)?;
        face.check_rhombus(tolerances::GEOMETRY)?;
        Ok(face)
    }

    /// Builds a face without requiring equal sides. Used to probe non-rhombic shapes.
    pub fn quadrilateral(corners: [VertexRecord; 4]) -> Result<Self> {
        let kinds = corners.map(|c| c.kind);
        if kinds
            != [
                VertexKind::Primal,
                VertexKind::Dual,
                VertexKind::Primal,
                VertexKind::Dual,
            ]
        {
            return Err(Error::DegenerateGeometry(format!(
                "corners must alternate primal/dual starting at a primal vertex, got {kinds:?}"
            )));
        }
        let [p1, d1, p2, d2] = corners.map(|c| c.z);
        let edge_deltas = [d1 - p1, p2 - d1, d2 - p2, p1 - d2];
        if edge_deltas.iter().any(|d| d.norm() < tolerances::GEOMETRY) {
            return Err(Error::DegenerateGeometry("coincident corners".into()));
        }
        let alpha = turn(d1 - p2, d2 - p2);
        if alpha.abs() < tolerances::GEOMETRY || PI - alpha.abs() < tolerances::GEOMETRY {
            return Err(Error::DegenerateGeometry(format!(
                "flat face with opening angle {alpha}"
            )));
        }
        let edge_thetas = [
            theta_of(d1 - p1),
            theta_of(d1 - p2),
            theta_of(d2 - p2),
            theta_of(d2 - p1),
        ];
        Ok(Self {
            corners,
            alpha,
            edge_thetas,
            edge_deltas,
        })
    }

    pub fn check_rhombus(&self, tol: f64) -> Result<()> {
        let lens = self.edge_deltas.map(|d| d.norm());
        let scale = lens.iter().cloned().fold(0.0, f64::max);
        let closure: Complex64 = self.edge_deltas.iter().sum();
        if closure.norm() > tol * scale {
            return Err(Error::DegenerateGeometry(format!(
                "face does not close: |Σδz| = {:e}",
                closure.norm()
            )));
        }
        for l in lens {
            if (l - lens[0]).abs() > tol * scale {
                return Err(Error::DegenerateGeometry(format!(
                    "unequal sides {lens:?}"
                )));
            }
        }
        let [a_p1, a_d1, a_p2, a_d2] = self.interior_angles();
        let dual = (PI - self.alpha.abs()).copysign(self.alpha);
        for (got, want) in [(a_p1, self.alpha), (a_p2, self.alpha), (a_d1, dual), (a_d2, dual)] {
            if (got - want).abs() > tol.max(1e-9) {
                return Err(Error::DegenerateGeometry(format!(
                    "interior angle {got} differs from {want}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_rhombus(&self) -> bool {
        self.check_rhombus(tolerances::GEOMETRY).is_ok()
    }

    /// Signed interior angles at `P1, D1, P2, D2`.
    pub fn interior_angles(&self) -> [f64; 4] {
        let [p1, d1, p2, d2] = self.points();
        [
            turn(d2 - p1, d1 - p1),
            turn(p1 - d1, p2 - d1),
            turn(d1 - p2, d2 - p2),
            turn(p2 - d2, p1 - d2),
        ]
    }

    pub fn points(&self) -> [Complex64; 4] {
        self.corners.map(|c| c.z)
    }

    pub fn ids(&self) -> [usize; 4] {
        self.corners.map(|c| c.id)
    }

    pub fn primal_ids(&self) -> (usize, usize) {
        (self.corners[0].id, self.corners[2].id)
    }

    pub fn dual_ids(&self) -> (usize, usize) {
        (self.corners[1].id, self.corners[3].id)
    }

    /// Edge angles continued around the face from the wrapped `θ(P1→D1)`.
    ///
    /// Same indexing as `edge_thetas`. The parafermion phases `e^{-ipθ}` of one
    /// face are evaluated on these, so that the four phases belong to a single
    /// branch regardless of how the face sits relative to the cut at `±π`.
    pub fn phase_angles(&self) -> [f64; 4] {
        let [p1, d1, p2, d2] = self.points();
        let t11 = self.edge_thetas[0];
        let t12 = t11 + turn(d2 - p1, d1 - p1);
        let t22 = t11 + PI + turn(d2 - p2, p1 - d1);
        let t21 = t22 + turn(d1 - p2, d2 - p2);
        [t11, t21, t22, t12]
    }

    pub fn side_length(&self) -> f64 {
        self.edge_deltas[0].norm()
    }

    pub fn center(&self) -> Complex64 {
        self.points().iter().sum::<Complex64>() / 4.0
    }

    /// Signed area (positive for counterclockwise corners).
    pub fn signed_area(&self) -> f64 {
        let pts = self.points();
        (0..4)
            .map(|i| {
                let a = pts[i];
                let b = pts[(i + 1) % 4];
                a.re * b.im - a.im * b.re
            })
            .sum::<f64>()
            / 2.0
    }

    /// The same face with every corner mapped through `f`.
    pub fn mapped(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        let corners = self.corners.map(|c| VertexRecord { z: f(c.z), ..c });
        Self::quadrilateral(corners)
    }

    /// The face relabelled as `(P2, D2, P1, D1)`; the string then crosses the other way.
    pub fn relabelled(&self) -> Self {
        let [p1, d1, p2, d2] = self.corners;
        Self::quadrilateral([p2, d2, p1, d1]).expect("relabelling keeps a valid face")
    }
}

/// The reference face with primal corners `1 + e^{iα}` and `0`, dual corners `e^{iα}` and `1`.
pub fn reference_rhombus(alpha: f64) -> Result<RhombusGeometry> {
    crate::weights::check_angle(alpha)?;
    let e = Complex64::from_polar(1.0, alpha);
    let one = Complex64::new(1.0, 0.0);
    RhombusGeometry::from_corners([
        VertexRecord::new(0, VertexKind::Primal, one + e),
        VertexRecord::new(1, VertexKind::Dual, e),
        VertexRecord::new(2, VertexKind::Primal, Complex64::new(0.0, 0.0)),
        VertexRecord::new(3, VertexKind::Dual, one),
    ])
}
