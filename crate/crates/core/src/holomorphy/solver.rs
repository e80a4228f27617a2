use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::residuals::{contour_coefficients, face_residuals};
use crate::clock::{root_of_unity, SectorIndex};
use crate::error::{Error, Result};
use crate::geometry::{reference_rhombus, RhombusGeometry};
use crate::tolerances;
use crate::weights::{check_angle, WeightVector};

/// Solution set of the holomorphicity condition over the free couplings `x_1..x_{⌊N/2⌋}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSolution {
    pub n: u32,
    pub m: u32,
    pub alpha: f64,
    /// Affine basis: the minimum-norm solution, then that point shifted by each nullspace vector.
    pub solutions: Vec<Vec<f64>>,
    pub nullspace: Vec<Vec<f64>>,
    pub nullspace_dim: usize,
    pub residual_of_fit: f64,
    /// Least-squares point, reported even when it does not solve the system.
    pub best_fit: Vec<f64>,
    /// Affine basis points dropped because a weight `W(σ)` vanishes there or they fail re-evaluation.
    pub rejected: usize,
    /// The same solve on the face of opening angle `π - α`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub companion: Option<Box<WeightSolution>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    /// Solve the α-face only.
    pub single_orientation: bool,
}

impl WeightSolution {
    pub fn exists(&self) -> bool {
        !self.solutions.is_empty()
    }

    pub fn particular(&self) -> Option<&[f64]> {
        self.solutions.first().map(|v| v.as_slice())
    }

    /// `particular + Σ t_i nullspace_i`.
    pub fn sample(&self, t: &[f64]) -> Option<Vec<f64>> {
        let mut x = self.particular()?.to_vec();
        for (ti, v) in t.iter().zip(&self.nullspace) {
            for (xk, vk) in x.iter_mut().zip(v) {
                *xk += ti * vk;
            }
        }
        Some(x)
    }

    /// Distance from `x` to the affine solution set, `None` when the set is empty.
    pub fn distance_to(&self, x: &[f64]) -> Option<f64> {
        let p = self.particular()?;
        let mut d: Vec<f64> = x.iter().zip(p).map(|(a, b)| a - b).collect();
        for v in &self.nullspace {
            let c: f64 = d.iter().zip(v).map(|(a, b)| a * b).sum();
            for (dk, vk) in d.iter_mut().zip(v) {
                *dk -= c * vk;
            }
        }
        Some(d.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per coordinate: `face, kind, index, k, value`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["face", "kind", "index", "k", "value"])?;
        let mut blocks = vec![("alpha", self)];
        if let Some(c) = &self.companion {
            blocks.push(("companion", c));
        }
        for (face, s) in blocks {
            for (kind, rows) in [("solution", &s.solutions), ("nullspace", &s.nullspace)] {
                for (i, x) in rows.iter().enumerate() {
                    for (k, v) in x.iter().enumerate() {
                        w.write_record([face, kind, &i.to_string(), &(k + 1).to_string(), &format!("{v:e}")])?;
                    }
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// The cleared condition `(c_a σ^m + c_b) W(ω^{-m} σ) + (c_c + c_d σ^m) W(σ) = 0`
/// for all `σ`, as a real linear system in the free couplings.
pub(crate) fn linear_system(face: &RhombusGeometry, sector: SectorIndex) -> (DMatrix<f64>, DVector<f64>) {
    let n = sector.modulus();
    let ni = n as i64;
    let m = sector.m() as i64;
    let free = n as usize / 2;
    let [ca, cb, cc, cd] = contour_coefficients(face, sector, false);
    let mut a = DMatrix::zeros(2 * n as usize, free);
    let mut b = DVector::zeros(2 * n as usize);
    for q in 0..ni {
        let sm = root_of_unity(n, q * m);
        let shifted = ca * sm + cb;
        let plain = cc + cd * sm;
        for k in 0..ni {
            let c = shifted * root_of_unity(n, (q - m) * k) + plain * root_of_unity(n, q * k);
            let row = 2 * q as usize;
            if k == 0 {
                b[row] -= c.re;
                b[row + 1] -= c.im;
            } else {
                let j = k.min(ni - k) as usize - 1;
                a[(row, j)] += c.re;
                a[(row + 1, j)] += c.im;
            }
        }
    }
    (a, b)
}

/// Solves the holomorphicity condition on an arbitrary quadrilateral face.
pub fn solve_face(face: &RhombusGeometry, sector: SectorIndex) -> Result<WeightSolution> {
    let n = sector.modulus();
    let (a, b) = linear_system(face, sector);
    let free = a.ncols();
    let svd = a.clone().svd(true, true);
    let system_norm = a.norm().max(b.norm()).max(1.0);
    let cutoff = tolerances::SVD_CUTOFF * svd.singular_values.max().max(system_norm);
    let best = svd
        .solve(&b, cutoff)
        .map_err(|e| Error::InconsistentWeights(format!("least-squares solve failed: {e}")))?;
    let residual_of_fit = (&a * &best - &b).norm();
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let nullspace: Vec<Vec<f64>> = (0..free)
        .filter(|&i| svd.singular_values[i] <= cutoff)
        .map(|i| v_t.row(i).iter().copied().collect())
        .collect();
    let best_fit: Vec<f64> = best.iter().copied().collect();
    let mut out = WeightSolution {
        n,
        m: sector.m(),
        alpha: face.alpha,
        solutions: Vec::new(),
        nullspace_dim: nullspace.len(),
        nullspace,
        residual_of_fit,
        best_fit: best_fit.clone(),
        rejected: 0,
        companion: None,
    };
    if residual_of_fit > tolerances::FIT * system_norm {
        out.nullspace.clear();
        out.nullspace_dim = 0;
        return Ok(out);
    }
    let mut points = vec![best_fit.clone()];
    for v in &out.nullspace {
        points.push(best_fit.iter().zip(v).map(|(p, d)| p + d).collect());
    }
    for x in points {
        if validates(face, sector, &x) {
            out.solutions.push(x);
        } else {
            out.rejected += 1;
        }
    }
    Ok(out)
}

fn validates(face: &RhombusGeometry, sector: SectorIndex, x: &[f64]) -> bool {
    let Ok(w) = WeightVector::from_free(sector.modulus() as i64, x) else {
        return false;
    };
    let scale = 1.0 + x.iter().map(|v| v.abs()).sum::<f64>();
    match face_residuals(face, sector, &w) {
        Ok(rep) => rep.max_abs <= tolerances::IDENTITY * scale,
        Err(_) => false,
    }
}

/// Critical couplings from holomorphicity alone, for the α-face and its (π−α) companion.
pub fn solve_weights(sector: SectorIndex, alpha: f64, opts: SolveOptions) -> Result<WeightSolution> {
    check_angle(alpha)?;
    if alpha <= 0.0 {
        return Err(Error::InvalidAngle(alpha));
    }
    if sector.m() == 0 {
        return Err(Error::InvalidSector {
            m: 0,
            n: sector.modulus(),
        });
    }
    let mut sol = solve_face(&reference_rhombus(alpha)?, sector)?;
    if !opts.single_orientation {
        sol.companion = Some(Box::new(solve_face(&reference_rhombus(PI - alpha)?, sector)?));
    }
    Ok(sol)
}
