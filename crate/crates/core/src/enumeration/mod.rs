//! Exact enumeration of partition functions and disorder correlators.
//!
//! Configurations are enumerated with a base-N odometer over the spins. The
//! configuration space is cut into canonical chunks by the values of the
//! leading spins; chunk sums use compensated accumulation and are reduced in
//! chunk order, so results are bitwise identical for any number of workers.

mod engine;

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clock::{root_of_unity, CyclicValue, SectorIndex};
use crate::error::{Error, Result};
use crate::geometry::{CoveringLattice, StringEntry, VertexKind};
use crate::holomorphy::contour_terms;
use crate::tolerances;

use engine::{default_workers, Plan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Refuse lattices with more than this many configurations.
    pub cap: u64,
    /// Number of blocks processed concurrently; 0 picks the thread pool size.
    pub workers: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            cap: tolerances::DEFAULT_CONFIG_CAP,
            workers: 0,
        }
    }
}

impl EnumerationOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers,
            ..Self::default()
        }
    }

    fn blocks(&self) -> usize {
        if self.workers == 0 {
            default_workers()
        } else {
            self.workers
        }
    }
}

/// One spin value per primal vertex, in increasing vertex id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinConfiguration {
    pub values: Vec<CyclicValue>,
}

impl SpinConfiguration {
    /// The `index`-th configuration in odometer order (first spin most significant).
    pub fn from_index(n: u32, spins: usize, mut index: u128) -> Result<Self> {
        let mut values = vec![CyclicValue::new(n as i64, 0)?; spins];
        for v in values.iter_mut().rev() {
            *v = CyclicValue::new(n as i64, (index % n as u128) as i64)?;
            index /= n as u128;
        }
        Ok(Self { values })
    }
}

/// A disorder string: a dual path from its anchor to the boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisorderString {
    sector: SectorIndex,
    path: Vec<usize>,
    /// `(primal edge, sign)` per step; `+1` when stepping `D1 → D2` of the edge's face.
    crossings: Vec<(usize, i32)>,
}

impl DisorderString {
    pub fn new(lat: &CoveringLattice, sector: SectorIndex, path: Vec<usize>) -> Result<Self> {
        let (first, last) = match (path.first(), path.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(Error::InvalidString("empty path".into())),
        };
        if first >= lat.vertices().len() || lat.vertex(first).kind != VertexKind::Dual {
            return Err(Error::InvalidString(format!("anchor {first} is not a dual vertex")));
        }
        if !lat.boundary().contains(&last) {
            return Err(Error::InvalidString(format!(
                "path ends at {last}, which is not on the boundary"
            )));
        }
        let mut crossings = Vec::with_capacity(path.len() - 1);
        for w in path.windows(2) {
            let step = lat
                .dual_steps(w[0])
                .into_iter()
                .find(|s| s.to == w[1])
                .ok_or_else(|| Error::InvalidString(format!("{} and {} are not dual neighbours", w[0], w[1])))?;
            crossings.push((step.face, step.sign));
        }
        Ok(Self {
            sector,
            path,
            crossings,
        })
    }

    /// The shortest string from `anchor` to the boundary.
    pub fn to_boundary(lat: &CoveringLattice, sector: SectorIndex, anchor: usize) -> Result<Self> {
        Self::new(lat, sector, lat.path_to_boundary(anchor)?)
    }

    pub fn from_entry(lat: &CoveringLattice, entry: &StringEntry) -> Result<Self> {
        let n = lat.weights_modulus()?;
        Self::new(lat, SectorIndex::new(n as i64, entry.sector as i64)?, entry.path.clone())
    }

    /// The string from `D1` of `face` across it to `D2`, then along `tail`.
    fn across(face: usize, d1: usize, sector: SectorIndex, tail: &DisorderString) -> Self {
        let mut path = vec![d1];
        path.extend(&tail.path);
        let mut crossings = vec![(face, 1)];
        crossings.extend(&tail.crossings);
        Self {
            sector,
            path,
            crossings,
        }
    }

    pub fn sector(&self) -> SectorIndex {
        self.sector
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn crossings(&self) -> &[(usize, i32)] {
        &self.crossings
    }

    pub fn anchor(&self) -> usize {
        self.path[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorResult {
    pub value: Complex64,
    #[serde(rename = "Z")]
    pub z: f64,
    pub config_count: u128,
    /// Whether the spectator charges sum to zero mod N; otherwise the value vanishes by symmetry.
    pub neutral: bool,
}

fn edge_shifts(lat: &CoveringLattice, n: u32, strings: &[DisorderString]) -> Result<Vec<i64>> {
    let mut shifts = vec![0i64; lat.primal_edges().len()];
    for s in strings {
        if s.sector.modulus() != n {
            return Err(Error::InvalidString(format!(
                "string sector has N={} but the lattice weights have N={n}",
                s.sector.modulus()
            )));
        }
        for &(e, sign) in &s.crossings {
            shifts[e] = (shifts[e] + sign as i64 * s.sector.m() as i64).rem_euclid(n as i64);
        }
    }
    Ok(shifts)
}

fn is_neutral(n: u32, spectators: &[(usize, i64)]) -> bool {
    spectators.iter().map(|&(_, p)| p).sum::<i64>().rem_euclid(n as i64) == 0
}

/// `Z = Σ_config Π_edges W`.
pub fn partition_function(lat: &CoveringLattice, opts: EnumerationOptions) -> Result<f64> {
    let plan = Plan::new(lat, &vec![0; lat.primal_edges().len()], &[], opts.cap)?;
    Ok(plan.run(opts.blocks()).z)
}

/// `⟨Π spectators⟩` in the ensemble with string-substituted weights, normalised by the plain `Z`.
pub fn correlator(
    lat: &CoveringLattice,
    strings: &[DisorderString],
    spectators: &[(usize, i64)],
    opts: EnumerationOptions,
) -> Result<CorrelatorResult> {
    let n = lat.weights_modulus()?;
    let plain = Plan::new(lat, &vec![0; lat.primal_edges().len()], &[], opts.cap)?;
    let z = plain.run(opts.blocks()).z;
    let plan = Plan::new(lat, &edge_shifts(lat, n, strings)?, spectators, opts.cap)?;
    let num = plan.run(opts.blocks()).num;
    Ok(CorrelatorResult {
        value: num / z,
        z,
        config_count: plan.config_count(),
        neutral: is_neutral(n, spectators),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceSumReport {
    pub face: usize,
    pub m: u32,
    pub residual: Complex64,
    /// The four contour terms `e^{-ipθ} ⟨s^m μ⟩ δz` in edge order `(P1,D1), (P2,D1), (P2,D2), (P1,D2)`.
    pub terms: [Complex64; 4],
    /// Largest term magnitude.
    pub scale: f64,
    pub tail: Vec<usize>,
}

/// Strings for the two dual corners of `face` sharing one tail from `D2`.
fn face_strings(lat: &CoveringLattice, face: usize, sector: SectorIndex) -> Result<(DisorderString, DisorderString)> {
    if face >= lat.faces().len() {
        return Err(Error::InvalidLattice(format!("face {face} out of range")));
    }
    let (d1, d2) = lat.face(face).dual_ids();
    let tail = DisorderString::new(lat, sector, lat.path_to_boundary_avoiding(d2, &BTreeSet::from([d1]))?)?;
    Ok((DisorderString::across(face, d1, sector, &tail), tail))
}

/// A charge `N - m` on the primal vertex farthest from the face, which makes
/// `⟨s^m μ · spectator⟩` neutral.
pub fn neutralizing_spectator(lat: &CoveringLattice, face: usize, sector: SectorIndex) -> (usize, i64) {
    let c = lat.face(face).center();
    let far = lat
        .ids_of(VertexKind::Primal)
        .into_iter()
        .max_by(|&a, &b| {
            let da = (lat.vertex(a).z - c).norm();
            let db = (lat.vertex(b).z - c).norm();
            da.total_cmp(&db).then(b.cmp(&a))
        })
        .expect("lattice has primal vertices");
    let n = sector.modulus() as i64;
    (far, (n - sector.m() as i64).rem_euclid(n))
}

/// The contour sum `Σ_e e^{-ipθ_e} ⟨s^m μ (spectators)⟩ δz_e` around one face.
pub fn face_sum_check(
    lat: &CoveringLattice,
    face: usize,
    sector: SectorIndex,
    spectators: &[(usize, i64)],
    opts: EnumerationOptions,
) -> Result<FaceSumReport> {
    let n = lat.weights_modulus()?;
    if sector.modulus() != n {
        return Err(Error::InvalidSector {
            m: sector.m() as i64,
            n,
        });
    }
    let (s1, s2) = face_strings(lat, face, sector)?;
    let (p1, p2) = lat.face(face).primal_ids();
    let coeffs = contour_terms(lat.face(face), sector);
    let m = sector.m() as i64;
    let mut terms = [Complex64::new(0.0, 0.0); 4];
    for (k, (p, s)) in [(p1, &s1), (p2, &s1), (p2, &s2), (p1, &s2)].into_iter().enumerate() {
        let mut spec = spectators.to_vec();
        spec.push((p, m));
        let c = correlator(lat, std::slice::from_ref(s), &spec, opts)?;
        terms[k] = coeffs[k] * c.value;
    }
    Ok(FaceSumReport {
        face,
        m: sector.m(),
        residual: terms.iter().sum(),
        terms,
        scale: terms.iter().map(|t| t.norm()).fold(0.0, f64::max),
        tail: s2.path,
    })
}

/// Largest relative unnormalised face sum over all configurations.
///
/// For each configuration the four terms `e^{-ipθ} δz s_P^m Π W̃` are summed
/// before any averaging; the result is `max |Σ| / Σ |term|`.
pub fn per_configuration_check(
    lat: &CoveringLattice,
    face: usize,
    sector: SectorIndex,
    opts: EnumerationOptions,
) -> Result<f64> {
    let n = lat.weights_modulus()?;
    let (s1, s2) = face_strings(lat, face, sector)?;
    let ids = lat.ids_of(VertexKind::Primal);
    let spins = ids.len();
    let count = (n as u128).checked_pow(spins as u32).unwrap_or(u128::MAX);
    if count > opts.cap as u128 {
        return Err(Error::BudgetExceeded {
            required: count,
            cap: opts.cap,
        });
    }
    let mut pos = vec![usize::MAX; lat.vertices().len()];
    for (i, &id) in ids.iter().enumerate() {
        pos[id] = i;
    }
    let tables = |shifts: &[i64]| -> Result<Vec<Vec<f64>>> {
        lat.primal_edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| {
                let w = edge.weights.as_ref().ok_or(Error::MissingWeights(e))?;
                Ok((0..n as i64).map(|d| w.eval_unchecked(d - shifts[e])).collect())
            })
            .collect()
    };
    let t1 = tables(&edge_shifts(lat, n, &[s1])?)?;
    let t2 = tables(&edge_shifts(lat, n, &[s2])?)?;
    let (p1, p2) = lat.face(face).primal_ids();
    let coeffs = contour_terms(lat.face(face), sector);
    let m = sector.m() as i64;
    let mut worst: f64 = 0.0;
    for index in 0..count {
        let cfg = SpinConfiguration::from_index(n, spins, index)?;
        let q = |v: usize| cfg.values[pos[v]].residue() as i64;
        let (mut b1, mut b2) = (1.0, 1.0);
        for (e, edge) in lat.primal_edges().iter().enumerate() {
            let d = (q(edge.p1) - q(edge.p2)).rem_euclid(n as i64) as usize;
            b1 *= t1[e][d];
            b2 *= t2[e][d];
        }
        let (s_p1, s_p2) = (root_of_unity(n, m * q(p1)), root_of_unity(n, m * q(p2)));
        let terms = [
            coeffs[0] * s_p1 * b1,
            coeffs[1] * s_p2 * b1,
            coeffs[2] * s_p2 * b2,
            coeffs[3] * s_p1 * b2,
        ];
        let scale: f64 = terms.iter().map(|t| t.norm()).sum();
        if scale > 0.0 {
            worst = worst.max(terms.iter().sum::<Complex64>().norm() / scale);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathIndependenceReport {
    /// `min_j |A - ω^j B| / |A|`.
    pub deviation: f64,
    /// The minimising `j`.
    pub gauge: u32,
    pub value_a: Complex64,
    pub value_b: Complex64,
    pub neutral: bool,
}

/// Compares the correlator with the string along `path_a` against `path_b`.
pub fn path_independence_check(
    lat: &CoveringLattice,
    sector: SectorIndex,
    path_a: Vec<usize>,
    path_b: Vec<usize>,
    spectators: &[(usize, i64)],
    opts: EnumerationOptions,
) -> Result<PathIndependenceReport> {
    if path_a.first() != path_b.first() {
        return Err(Error::InvalidString("paths must share their anchor".into()));
    }
    let n = lat.weights_modulus()?;
    let a = correlator(lat, &[DisorderString::new(lat, sector, path_a)?], spectators, opts)?;
    let b = correlator(lat, &[DisorderString::new(lat, sector, path_b)?], spectators, opts)?;
    let (va, vb) = (a.value, b.value);
    let (mut best, mut gauge) = (f64::INFINITY, 0);
    for j in 0..n {
        let d = (va - root_of_unity(n, j as i64) * vb).norm();
        if d < best {
            best = d;
            gauge = j;
        }
    }
    let deviation = if va.norm() > 0.0 { best / va.norm() } else { (va - vb).norm() };
    Ok(PathIndependenceReport {
        deviation,
        gauge,
        value_a: va,
        value_b: vb,
        neutral: is_neutral(n, spectators),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_square_covering;
    use crate::weights::WeightVector;
    use std::f64::consts::PI;

    #[test]
    fn odometer_matches_direct_sum() {
        let mut lat = build_square_covering(2, 3, 1.0).unwrap();
        lat.assign_critical_weights(3).unwrap();
        let z = partition_function(&lat, EnumerationOptions::with_workers(1)).unwrap();
        let ids = lat.ids_of(VertexKind::Primal);
        let mut direct = 0.0;
        for index in 0..3u128.pow(ids.len() as u32) {
            let cfg = SpinConfiguration::from_index(3, ids.len(), index).unwrap();
            let q = |v: usize| cfg.values[ids.iter().position(|&x| x == v).unwrap()].residue() as i64;
            let mut w = 1.0;
            for e in lat.primal_edges() {
                w *= crate::weights::weight_eval(e.weights.as_ref().unwrap(), q(e.p1) - q(e.p2)).unwrap();
            }
            direct += w;
        }
        assert!((z - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn free_spins() {
        let mut lat = build_square_covering(2, 3, PI / 2.0).unwrap();
        lat.assign_uniform_weights(&WeightVector::trivial(3).unwrap());
        assert_eq!(partition_function(&lat, EnumerationOptions::default()).unwrap(), 729.0);
    }

    #[test]
    fn cap_is_enforced() {
        let lat = build_square_covering(4, 4, 1.0).unwrap().with_critical_weights(5).unwrap();
        let opts = EnumerationOptions {
            cap: 1000,
            workers: 1,
        };
        assert!(matches!(
            partition_function(&lat, opts),
            Err(Error::BudgetExceeded { cap: 1000, .. })
        ));
    }

    #[test]
    fn missing_weights_are_reported() {
        let lat = build_square_covering(2, 2, 1.0).unwrap();
        assert!(matches!(
            partition_function(&lat, EnumerationOptions::default()),
            Err(Error::MissingWeights(0))
        ));
    }

    #[test]
    fn strings_must_reach_the_boundary() {
        let lat = build_square_covering(3, 3, 1.0).unwrap().with_critical_weights(2).unwrap();
        let s = SectorIndex::new(2, 1).unwrap();
        let inner: Vec<usize> = lat
            .ids_of(VertexKind::Dual)
            .into_iter()
            .filter(|d| !lat.boundary().contains(d))
            .collect();
        assert!(DisorderString::new(&lat, s, vec![inner[0]]).is_err());
        let st = DisorderString::to_boundary(&lat, s, inner[0]).unwrap();
        assert_eq!(st.crossings().len(), st.path().len() - 1);
        assert!(lat.boundary().contains(st.path().last().unwrap()));
    }

    #[test]
    fn neutral_sector_face_sum_vanishes() {
        let lat = build_square_covering(3, 3, 1.2).unwrap().with_critical_weights(3).unwrap();
        let face = lat.interior_faces()[0];
        let rep = face_sum_check(&lat, face, SectorIndex::new(3, 0).unwrap(), &[], EnumerationOptions::default()).unwrap();
        assert!(rep.residual.norm() < 1e-14);
    }
}
