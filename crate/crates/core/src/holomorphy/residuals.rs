use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cft::{conformal_spin, to_f64};
use crate::clock::{root_of_unity, SectorIndex};
use crate::error::{Error, Result};
use crate::geometry::RhombusGeometry;
use crate::weights::WeightVector;

/// Per-σ residuals of the contour sum around one face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub n: u32,
    pub m: u32,
    /// Indexed by `q`, with `σ = ω^q` the relative spin `s_{P1} s_{P2}*`.
    pub residuals: Vec<Complex64>,
    pub max_abs: f64,
    pub weights_used: WeightVector,
    pub rhombus: RhombusGeometry,
}

impl ResidualReport {
    fn new(sector: SectorIndex, residuals: Vec<Complex64>, w: &WeightVector, rh: &RhombusGeometry) -> Self {
        let max_abs = residuals.iter().map(|r| r.norm()).fold(0.0, f64::max);
        Self {
            n: sector.modulus(),
            m: sector.m(),
            residuals,
            max_abs,
            weights_used: w.clone(),
            rhombus: rh.clone(),
        }
    }

    pub fn vanishes(&self, tol: f64) -> bool {
        self.max_abs <= tol
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per σ: `q, re, im, abs`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["q", "re", "im", "abs"])?;
        for (q, r) in self.residuals.iter().enumerate() {
            w.write_record([
                q.to_string(),
                format!("{:e}", r.re),
                format!("{:e}", r.im),
                format!("{:e}", r.norm()),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn check_pair(sector: SectorIndex, w: &WeightVector) -> Result<()> {
    if sector.modulus() != w.n() {
        return Err(Error::InconsistentWeights(format!(
            "weights have N={} but the sector has N={}",
            w.n(),
            sector.modulus()
        )));
    }
    Ok(())
}

/// `R_m(σ) = W(ω^{-m} σ) / W(σ)` at `σ = ω^q`: the factor picked up by the
/// disorder variable when its string is extended across one edge.
pub fn disorder_ratio(sector: SectorIndex, w: &WeightVector, q: i64) -> Result<Complex64> {
    check_pair(sector, w)?;
    let n = w.n() as i64;
    let den = w.eval_unchecked(q);
    let scale: f64 = w.coefficients().iter().map(|x| x.abs()).sum();
    if den.abs() <= 1e-14 * scale {
        return Err(Error::SingularWeight {
            q: q.rem_euclid(n) as u32,
            value: den,
        });
    }
    Ok(Complex64::new(w.eval_unchecked(q - sector.m() as i64) / den, 0.0))
}

/// Coefficients `(c_a, c_b, c_c, c_d)` of the face contour sum
/// `c_a σ^m R + c_b R + c_c + c_d σ^m`.
pub(crate) fn contour_coefficients(rh: &RhombusGeometry, sector: SectorIndex, anti: bool) -> [Complex64; 4] {
    let p = to_f64(conformal_spin(sector));
    let spin = if anti { p - 2.0 } else { p };
    let [t11, t21, t22, t12] = rh.phase_angles();
    let dz = if anti {
        rh.edge_deltas.map(|d| d.conj())
    } else {
        rh.edge_deltas
    };
    let phase = |t: f64| Complex64::from_polar(1.0, -spin * t);
    [
        phase(t11) * dz[0],
        phase(t21) * dz[1],
        phase(t22) * dz[2],
        phase(t12) * dz[3],
    ]
}

fn residuals(rh: &RhombusGeometry, sector: SectorIndex, w: &WeightVector, anti: bool) -> Result<ResidualReport> {
    check_pair(sector, w)?;
    let n = sector.modulus();
    let m = sector.m() as i64;
    let [ca, cb, cc, cd] = contour_coefficients(rh, sector, anti);
    let mut out = Vec::with_capacity(n as usize);
    for q in 0..n as i64 {
        let r = disorder_ratio(sector, w, q)?;
        let sm = root_of_unity(n, q * m);
        out.push(ca * sm * r + cb * r + cc + cd * sm);
    }
    Ok(ResidualReport::new(sector, out, w, rh))
}

/// Residuals of `Σ_e ψ_e δz_e` for the face, divided by `s_{P2}^m μ_{D2}`.
///
/// The string reaching `D1` crosses the primal edge `P1 P2` with `P1` on its
/// left, so `ψ` at `(P1, D1)` and `(P2, D1)` carries the disorder ratio.
pub fn face_residuals(rh: &RhombusGeometry, sector: SectorIndex, w: &WeightVector) -> Result<ResidualReport> {
    residuals(rh, sector, w, false)
}

/// Residuals of `Σ_e ψ̂_e δz̄_e` with `ψ̂ = e^{2iθ} ψ`.
pub fn antiholomorphic_residuals(
    rh: &RhombusGeometry,
    sector: SectorIndex,
    w: &WeightVector,
) -> Result<ResidualReport> {
    residuals(rh, sector, w, true)
}
