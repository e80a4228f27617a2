use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use zn_parafermion::enumeration::{per_configuration_check, EnumerationOptions};
use zn_parafermion::geometry::{reference_rhombus, CoveringLattice};
use zn_parafermion::holomorphy::{
    antiholomorphic_residuals, disorder_ratio, face_residuals, solve_weights, SolveOptions,
};
use zn_parafermion::{central_charge, conformal_spin, fz_weights, SectorIndex, WeightVector};

fn sector(n: i64, m: i64) -> SectorIndex {
    SectorIndex::new(n, m).unwrap()
}

#[test]
fn conformal_data() {
    assert_eq!(conformal_spin(sector(2, 1)), Rational64::new(1, 2));
    assert_eq!(conformal_spin(sector(3, 1)), Rational64::new(2, 3));
    assert_eq!(conformal_spin(sector(5, 2)), Rational64::new(6, 5));
    assert_eq!(central_charge(2).unwrap(), Rational64::new(1, 2));
    assert_eq!(central_charge(3).unwrap(), Rational64::new(4, 5));
    assert_eq!(central_charge(4).unwrap(), Rational64::new(1, 1));
}

#[test]
fn three_state_weights_closed_form() {
    for alpha in [0.2, 1.0, PI / 2.0, 2.5] {
        let x = fz_weights(3, alpha).unwrap();
        let want = (alpha / 6.0).sin() / (PI / 3.0 - alpha / 6.0).sin();
        assert_relative_eq!(x.coefficients()[1], want, max_relative = 1e-14);
        assert_relative_eq!(x.coefficients()[2], want, max_relative = 1e-14);
    }
}

#[test]
fn disorder_ratio_at_zero_charge() {
    let w = fz_weights(4, 1.0).unwrap();
    for m in 1..4 {
        let r = disorder_ratio(sector(4, m), &w, 0).unwrap();
        assert!(r.im.abs() < 1e-14 && r.re > 0.0);
    }
    assert_relative_eq!(disorder_ratio(sector(4, 2), &w, 0).unwrap().re, {
        let c = w.coefficients();
        (c[0] - c[1] + c[2] - c[3]) / c.iter().sum::<f64>()
    }, max_relative = 1e-14);
}

/// The per-charge residuals vanish exactly when the contour sum vanishes
/// configuration by configuration on a one-edge lattice.
#[test]
fn residuals_agree_with_configuration_loop() {
    for n in [2i64, 3, 4] {
        for alpha in [0.5, PI / 2.0, 2.4] {
            let fz = fz_weights(n, alpha).unwrap();
            for w in [fz.clone(), fz.perturbed(1, 0.07).unwrap()] {
                let rh = reference_rhombus(alpha).unwrap();
                let points: Vec<_> = rh.corners.iter().map(|c| (c.kind, c.z)).collect();
                let mut lat = CoveringLattice::from_tiles(&points, &[[0, 1, 2, 3]]).unwrap();
                lat.assign_uniform_weights(&w);
                for m in 1..n {
                    let s = sector(n, m);
                    let face = lat.face(0);
                    let local = face_residuals(face, s, &w).unwrap().max_abs;
                    let config = per_configuration_check(&lat, 0, s, EnumerationOptions::default()).unwrap();
                    assert_eq!(local < 1e-12, config < 1e-12, "N={n} m={m} alpha={alpha}: {local} vs {config}");
                }
            }
        }
    }
}

#[test]
fn similarity_scales_residuals_uniformly() {
    let base = reference_rhombus(1.1).unwrap();
    let a = Complex64::from_polar(3.0, 0.7);
    let moved = base.mapped(|z| a * z + Complex64::new(2.0, -5.0)).unwrap();
    let w = fz_weights(3, 1.1).unwrap().perturbed(1, 0.1).unwrap();
    let r0 = face_residuals(&base, sector(3, 1), &w).unwrap();
    let r1 = face_residuals(&moved, sector(3, 1), &w).unwrap();
    let k = r1.residuals[0] / r0.residuals[0];
    assert_relative_eq!(k.norm(), 3.0, max_relative = 1e-12);
    for (x, y) in r0.residuals.iter().zip(&r1.residuals) {
        assert!((y - k * x).norm() < 1e-12);
    }
}

#[test]
fn conjugate_sector_reverses_charges() {
    let face = reference_rhombus(1.3).unwrap();
    let w = WeightVector::from_free(5, &[0.4, 0.3]).unwrap();
    let r1 = face_residuals(&face, sector(5, 1), &w).unwrap();
    let r4 = face_residuals(&face, sector(5, 4), &w).unwrap();
    let a = antiholomorphic_residuals(&face, sector(5, 1), &w).unwrap();
    let b = antiholomorphic_residuals(&face, sector(5, 4), &w).unwrap();
    for q in 0..5 {
        assert!((r4.residuals[q] - r1.residuals[(5 - q) % 5]).norm() < 1e-12, "q={q}");
        assert!((b.residuals[q] - a.residuals[(5 - q) % 5]).norm() < 1e-12, "q={q}");
    }
}

#[test]
fn five_state_sector_structure() {
    let face = reference_rhombus(0.9).unwrap();
    let fz = fz_weights(5, 0.9).unwrap();
    let swapped = WeightVector::from_free(5, &[fz.free()[1], fz.free()[0]]).unwrap();
    for (m, good, bad) in [(1, &fz, &swapped), (2, &swapped, &fz), (3, &swapped, &fz), (4, &fz, &swapped)] {
        assert!(face_residuals(&face, sector(5, m), good).unwrap().max_abs < 1e-12);
        assert!(face_residuals(&face, sector(5, m), bad).unwrap().max_abs > 1e-3);
    }
}

#[test]
fn solver_report_serialises() {
    let sol = solve_weights(sector(3, 1), 1.0, SolveOptions::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&sol.to_json().unwrap()).unwrap();
    assert_eq!(v["n"], 3);
    assert!(sol.to_csv().unwrap().lines().count() > 1);
    assert!(sol.companion.is_some());
    let single = solve_weights(sector(3, 1), 1.0, SolveOptions { single_orientation: true }).unwrap();
    assert!(single.companion.is_none());
}

#[test]
fn solver_rejects_bad_input() {
    assert!(solve_weights(sector(3, 1), 0.0, SolveOptions::default()).is_err());
    assert!(solve_weights(sector(3, 1), -1.0, SolveOptions::default()).is_err());
    assert!(solve_weights(sector(3, 0), 1.0, SolveOptions::default()).is_err());
    assert!(fz_weights(1, 1.0).is_err());
    assert!(fz_weights(3, PI).is_err());
}

proptest! {
    #[test]
    fn fz_weights_are_symmetric_and_in_unit_interval(n in 2i64..9, alpha in 0.01f64..3.13) {
        let x = fz_weights(n, alpha).unwrap();
        let c = x.coefficients();
        prop_assert_eq!(c[0], 1.0);
        for k in 1..n as usize {
            prop_assert!((c[k] - c[n as usize - k]).abs() < 1e-15);
            prop_assert!(c[k] > 0.0 && c[k] < 1.0);
        }
    }

    #[test]
    fn ising_weight_is_tan_quarter_angle(alpha in 0.01f64..3.13) {
        let x = fz_weights(2, alpha).unwrap().coefficients()[1];
        prop_assert!((x - (alpha / 4.0).tan()).abs() < 1e-14);
    }

    #[test]
    fn fz_is_holomorphic_on_any_similar_face(
        n in 2i64..6,
        alpha in 0.05f64..3.09,
        scale in 0.1f64..10.0,
        turn in -PI..PI,
        dx in -5.0f64..5.0,
    ) {
        let a = Complex64::from_polar(scale, turn);
        let face = reference_rhombus(alpha).unwrap().mapped(|z| a * z + dx).unwrap();
        let w = fz_weights(n, alpha).unwrap();
        let s = sector(n, 1);
        prop_assert!(face_residuals(&face, s, &w).unwrap().max_abs < 1e-11 * scale);
        prop_assert!(antiholomorphic_residuals(&face, s, &w).unwrap().max_abs < 1e-11 * scale);
    }
}
