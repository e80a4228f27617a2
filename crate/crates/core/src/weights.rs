//! Edge Boltzmann weights `W = Σ_k x_k (s s'*)^k` and the critical family `x_ck(α)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::clock::{check_modulus, root_of_unity};
use crate::error::{Error, Result};
use crate::tolerances;

/// Couplings `x_0..x_{N-1}` of one edge, with `x_0 = 1` and `x_k = x_{N-k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct WeightVector {
    x: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawWeights {
    n: u32,
    x: Vec<f64>,
}

impl TryFrom<RawWeights> for WeightVector {
    type Error = Error;

    fn try_from(raw: RawWeights) -> Result<Self> {
        if raw.x.len() != raw.n as usize {
            return Err(Error::InconsistentWeights(format!(
                "length {} does not match N={}",
                raw.x.len(),
                raw.n
            )));
        }
        WeightVector::new(raw.x)
    }
}

impl From<WeightVector> for RawWeights {
    fn from(w: WeightVector) -> Self {
        RawWeights {
            n: w.n(),
            x: w.x,
        }
    }
}

impl WeightVector {
    /// Validates a full coefficient list against the normalisation and reality constraints.
    pub fn new(x: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(x, tolerances::CONSTRUCTION)
    }

    pub fn with_tolerance(mut x: Vec<f64>, tol: f64) -> Result<Self> {
        let n = check_modulus(x.len() as i64)? as usize;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InconsistentWeights("non-finite coefficient".into()));
        }
        if (x[0] - 1.0).abs() > tol {
            return Err(Error::InconsistentWeights(format!(
                "x_0 = {} but must be 1",
                x[0]
            )));
        }
        for k in 1..n {
            if (x[k] - x[n - k]).abs() > tol {
                return Err(Error::InconsistentWeights(format!(
                    "x_{k} = {} differs from x_{} = {}",
                    x[k],
                    n - k,
                    x[n - k]
                )));
            }
        }
        x[0] = 1.0;
        for k in 1..=n / 2 {
            let v = x[k];
            x[n - k] = v;
        }
        Ok(Self { x })
    }

    /// Builds the vector from the `⌊N/2⌋` free couplings `x_1..x_{⌊N/2⌋}`.
    pub fn from_free(n: i64, free: &[f64]) -> Result<Self> {
        let n = check_modulus(n)? as usize;
        if free.len() != n / 2 {
            return Err(Error::InconsistentWeights(format!(
                "N={n} needs {} free couplings, got {}",
                n / 2,
                free.len()
            )));
        }
        let mut x = vec![0.0; n];
        x[0] = 1.0;
        for (k, &v) in free.iter().enumerate() {
            x[k + 1] = v;
            x[n - k - 1] = v;
        }
        Self::new(x)
    }

    /// Free spins: `x_k = 0` for `k >= 1`.
    pub fn trivial(n: i64) -> Result<Self> {
        let n = check_modulus(n)? as usize;
        let mut x = vec![0.0; n];
        x[0] = 1.0;
        Ok(Self { x })
    }

    /// N-state Potts weights: every `x_k = x` for `k >= 1`.
    pub fn potts(n: i64, x: f64) -> Result<Self> {
        let n = check_modulus(n)? as usize;
        let mut v = vec![x; n];
        v[0] = 1.0;
        Self::new(v)
    }

    pub fn n(&self) -> u32 {
        self.x.len() as u32
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.x
    }

    pub fn free(&self) -> &[f64] {
        &self.x[1..=self.x.len() / 2]
    }

    /// `x'_k = x_{r k mod N}`: the weights seen after relabelling `s -> s^r`.
    pub fn relabelled(&self, r: i64) -> Self {
        let n = self.x.len() as i64;
        let x = (0..n)
            .map(|k| self.x[(r * k).rem_euclid(n) as usize])
            .collect();
        Self { x }
    }

    /// A copy with `x_k` and `x_{N-k}` shifted by `delta`.
    pub fn perturbed(&self, k: usize, delta: f64) -> Result<Self> {
        let n = self.x.len();
        if k == 0 || k >= n {
            return Err(Error::InconsistentWeights(format!(
                "cannot perturb coupling x_{k}"
            )));
        }
        let mut x = self.x.clone();
        x[k] += delta;
        if n - k != k {
            x[n - k] += delta;
        }
        Ok(Self { x })
    }

    /// `W(ω^q)` for every `q`; real by the reality constraint.
    pub fn table(&self) -> Vec<f64> {
        (0..self.n() as i64).map(|q| self.eval_unchecked(q)).collect()
    }

    pub(crate) fn eval_unchecked(&self, q: i64) -> f64 {
        let n = self.n();
        self.x
            .iter()
            .enumerate()
            .map(|(k, &xk)| xk * root_of_unity(n, q * k as i64).re)
            .sum()
    }
}

/// `W(r, r')` evaluated at `s_r s_{r'}* = ω^q`.
pub fn weight_eval(w: &WeightVector, q: i64) -> Result<f64> {
    let n = w.n();
    let mut re = 0.0;
    let mut im = 0.0;
    let mut scale = 0.0;
    for (k, &xk) in w.coefficients().iter().enumerate() {
        let z = root_of_unity(n, q * k as i64);
        re += xk * z.re;
        im += xk * z.im;
        scale += xk.abs();
    }
    if im.abs() > 1e-14 * scale.max(1.0) * n as f64 {
        return Err(Error::InconsistentWeights(format!(
            "W(omega^{q}) has imaginary part {im:e}"
        )));
    }
    Ok(re)
}

/// Checks `0 < |α| < π`.
pub fn check_angle(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha == 0.0 || alpha.abs() >= PI {
        return Err(Error::InvalidAngle(alpha));
    }
    Ok(alpha)
}

/// Critical couplings `x_ck(α) = Π_{j<k} sin(πj/N + α/2N) / sin(π(j+1)/N − α/2N)`.
///
/// `α = π/2` is the isotropic square lattice; `α` is the opening angle of the
/// rhombus at the spin corners of the edge.
pub fn fz_weights(n: i64, alpha: f64) -> Result<WeightVector> {
    let n = check_modulus(n)?;
    check_angle(alpha)?;
    let nf = n as f64;
    let mut x = Vec::with_capacity(n as usize);
    x.push(1.0);
    let mut prod = 1.0;
    for j in 0..(n as usize - 1) {
        let num = (PI * j as f64 / nf + alpha / (2.0 * nf)).sin();
        let den = (PI * (j + 1) as f64 / nf - alpha / (2.0 * nf)).sin();
        if den.abs() < 1e-15 {
            return Err(Error::SingularAngle { alpha, factor: j });
        }
        prod *= num / den;
        x.push(prod);
    }
    WeightVector::new(x)
}
