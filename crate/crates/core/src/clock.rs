//! Z_N arithmetic: roots of unity, spin values and charge sectors.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Checks `n >= 2` and returns it as `u32`.
pub fn check_modulus(n: i64) -> Result<u32> {
    if n < 2 || n > u32::MAX as i64 {
        return Err(Error::InvalidModulus(n));
    }
    Ok(n as u32)
}

/// `ω^q` with `ω = e^{2πi/N}`.
pub fn omega(n: i64, q: i64) -> Result<Complex64> {
    let n = check_modulus(n)?;
    Ok(root_of_unity(n, q))
}

/// Unchecked `ω^q`; the exponent is reduced first so that large `q` stays exact.
pub(crate) fn root_of_unity(n: u32, q: i64) -> Complex64 {
    let r = q.rem_euclid(n as i64);
    match (4 * r).checked_rem(n as i64) {
        // quarter turns are exact
        Some(0) => match 4 * r / n as i64 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        },
        _ => Complex64::from_polar(1.0, TAU * r as f64 / n as f64),
    }
}

/// A spin value `ω^q` stored as its residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicValue {
    q: u32,
    n: u32,
}

impl CyclicValue {
    pub fn new(n: i64, q: i64) -> Result<Self> {
        let n = check_modulus(n)?;
        Ok(Self {
            q: q.rem_euclid(n as i64) as u32,
            n,
        })
    }

    pub fn residue(self) -> u32 {
        self.q
    }

    pub fn modulus(self) -> u32 {
        self.n
    }

    pub fn value(self) -> Complex64 {
        root_of_unity(self.n, self.q as i64)
    }

    /// `s^k`.
    pub fn pow(self, k: i64) -> Self {
        Self {
            q: (self.q as i64 * k).rem_euclid(self.n as i64) as u32,
            n: self.n,
        }
    }

    /// `s t*`.
    pub fn times_conj(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            q: (self.q + self.n - other.q) % self.n,
            n: self.n,
        }
    }
}

/// Charge sector `m` of disorder and parafermion operators, `0 <= m < N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorIndex {
    m: u32,
    n: u32,
}

impl SectorIndex {
    pub fn new(n: i64, m: i64) -> Result<Self> {
        let n = check_modulus(n)?;
        if m < 0 || m >= n as i64 {
            return Err(Error::InvalidSector { m, n });
        }
        Ok(Self { m: m as u32, n })
    }

    pub fn m(self) -> u32 {
        self.m
    }

    pub fn modulus(self) -> u32 {
        self.n
    }

    /// The conjugate sector `N - m` (`0` stays `0`).
    pub fn conjugate(self) -> Self {
        Self {
            m: (self.n - self.m) % self.n,
            n: self.n,
        }
    }

    /// Holomorphic sectors `1..=⌊N/2⌋`.
    pub fn holomorphic(n: i64) -> Result<Vec<Self>> {
        let n = check_modulus(n)?;
        Ok((1..=n / 2).map(|m| Self { m, n }).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn omega_examples() {
        let one = omega(4, 0).unwrap();
        assert_eq!(one, Complex64::new(1.0, 0.0));
        let i = omega(4, 1).unwrap();
        assert_eq!(i, Complex64::new(0.0, 1.0));
        let a = omega(3, 2).unwrap();
        let b = omega(3, 1).unwrap().conj();
        assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-15);
        assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-15);
    }

    #[test]
    fn omega_rejects_small_modulus() {
        assert!(matches!(omega(1, 0), Err(Error::InvalidModulus(1))));
        assert!(matches!(omega(-3, 0), Err(Error::InvalidModulus(-3))));
    }

    #[test]
    fn omega_is_periodic() {
        for n in 2..9 {
            for q in -20..20 {
                let a = omega(n, q).unwrap();
                let b = omega(n, q + n).unwrap();
                assert!((a - b).norm() < 1e-14);
                assert!((a.norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn cyclic_value_invariants() {
        let s = CyclicValue::new(5, -7).unwrap();
        assert_eq!(s.residue(), 3);
        assert!((s.value().norm() - 1.0).abs() < 1e-15);
        let t = CyclicValue::new(5, 4).unwrap();
        assert_eq!(s.times_conj(t).residue(), 4);
        assert_eq!(s.pow(2).residue(), 1);
    }

    #[test]
    fn sector_range() {
        assert!(SectorIndex::new(4, 4).is_err());
        assert!(SectorIndex::new(4, -1).is_err());
        let s = SectorIndex::new(5, 2).unwrap();
        assert_eq!(s.conjugate().m(), 3);
        assert_eq!(SectorIndex::new(5, 0).unwrap().conjugate().m(), 0);
        let h: Vec<u32> = SectorIndex::holomorphic(6).unwrap().iter().map(|s| s.m()).collect();
        assert_eq!(h, vec![1, 2, 3]);
    }
}
