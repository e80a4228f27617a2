use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::{fz_weights, WeightVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarTriangleReport {
    pub n: u32,
    pub alphas: [f64; 3],
    /// Fitted constant `R` in `D = R T`.
    pub ratio: f64,
    /// `max |D - R T| / max |D|` over all spin triples.
    pub max_dev: f64,
}

/// Compares the star `D(s1,s2,s3) = Σ_{s0} W1(s1 s0*) W2(s2 s0*) W3(s3 s0*)`
/// with the triangle `T = W̃1(s2 s3*) W̃2(s1 s3*) W̃3(s1 s2*)` over all `N³` triples.
pub fn star_triangle_check(
    alphas: [f64; 3],
    w_star: &[WeightVector; 3],
    w_tri: &[WeightVector; 3],
) -> Result<StarTriangleReport> {
    let sum: f64 = alphas.iter().sum();
    if (sum - PI).abs() > 1e-9 {
        return Err(Error::DegenerateGeometry(format!(
            "angles sum to {sum}, expected π"
        )));
    }
    let n = w_star[0].n();
    if w_star.iter().chain(w_tri).any(|w| w.n() != n) {
        return Err(Error::InconsistentWeights("weights have different N".into()));
    }
    let star: Vec<Vec<f64>> = w_star.iter().map(|w| w.table()).collect();
    let tri: Vec<Vec<f64>> = w_tri.iter().map(|w| w.table()).collect();
    let nn = n as usize;
    let d = |a: usize, b: usize| (a + nn - b) % nn;
    let mut pairs = Vec::with_capacity(nn * nn * nn);
    for s1 in 0..nn {
        for s2 in 0..nn {
            for s3 in 0..nn {
                let dv: f64 = (0..nn)
                    .map(|s0| star[0][d(s1, s0)] * star[1][d(s2, s0)] * star[2][d(s3, s0)])
                    .sum();
                let tv = tri[0][d(s2, s3)] * tri[1][d(s1, s3)] * tri[2][d(s1, s2)];
                if tv.abs() < 1e-300 {
                    return Err(Error::SingularWeight {
                        q: d(s1, s2) as u32,
                        value: tv,
                    });
                }
                pairs.push((dv, tv));
            }
        }
    }
    let ratio = pairs.iter().map(|(dv, tv)| dv / tv).sum::<f64>() / pairs.len() as f64;
    let dmax = pairs.iter().map(|(dv, _)| dv.abs()).fold(0.0, f64::max);
    let dev = pairs
        .iter()
        .map(|(dv, tv)| (dv - ratio * tv).abs())
        .fold(0.0, f64::max);
    Ok(StarTriangleReport {
        n,
        alphas,
        ratio,
        max_dev: if dmax > 0.0 { dev / dmax } else { dev },
    })
}

/// Critical weights for a triangle whose sides sit in rhombi of angles `alphas`
/// (side `i` opposite corner `s_i`): triangle edges get `x_c(α_i)`, the star
/// edges through the centre get `x_c(π - α_i)`.
pub fn critical_star_triangle_weights(n: i64, alphas: [f64; 3]) -> Result<([WeightVector; 3], [WeightVector; 3])> {
    let star = [
        fz_weights(n, PI - alphas[0])?,
        fz_weights(n, PI - alphas[1])?,
        fz_weights(n, PI - alphas[2])?,
    ];
    let tri = [
        fz_weights(n, alphas[0])?,
        fz_weights(n, alphas[1])?,
        fz_weights(n, alphas[2])?,
    ];
    Ok((star, tri))
}

pub fn critical_star_triangle(n: i64, alphas: [f64; 3]) -> Result<StarTriangleReport> {
    let (star, tri) = critical_star_triangle_weights(n, alphas)?;
    star_triangle_check(alphas, &star, &tri)
}
