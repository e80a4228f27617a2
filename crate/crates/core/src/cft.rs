//! Reference values of the Z_N parafermion CFT.

use num_rational::Rational64;

use crate::clock::{check_modulus, SectorIndex};
use crate::error::Result;

/// Conformal spin `p_m = m(N-m)/N` of the sector-`m` parafermion.
pub fn conformal_spin(sector: SectorIndex) -> Rational64 {
    let n = sector.modulus() as i64;
    let m = sector.m() as i64;
    Rational64::new(m * (n - m), n)
}

/// Central charge `c = 2(N-1)/(N+2)`.
pub fn central_charge(n: i64) -> Result<Rational64> {
    let n = check_modulus(n)? as i64;
    Ok(Rational64::new(2 * (n - 1), n + 2))
}

pub(crate) fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
