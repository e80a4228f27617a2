use serde_json::{json, Value};
use zn_parafermion::enumeration::{
    face_sum_check, neutralizing_spectator, partition_function, path_independence_check, DisorderString,
    EnumerationOptions,
};
use zn_parafermion::geometry::{
    build_honeycomb_covering, build_multigrid_tiling, build_square_covering, build_triangular_covering, export_svg,
    reference_rhombus, CoveringLattice, LatticeFile, LineArrangement, VertexKind,
};
use zn_parafermion::holomorphy::{
    antiholomorphic_residuals, critical_star_triangle_weights, face_residuals, solve_weights, star_triangle_check,
    SolveOptions,
};
use zn_parafermion::{fz_weights, SectorIndex, WeightVector};

use crate::args::{Check, Command, Common, LatticeAction, LatticeType, Shape};
use crate::report::{complex, Report};

pub type Outcome = Result<Report, String>;

fn invalid(e: impl std::fmt::Display) -> String {
    e.to_string()
}

struct Units {
    deg: bool,
}

impl Units {
    fn angle(&self, x: f64) -> f64 {
        if self.deg {
            x.to_radians()
        } else {
            x
        }
    }
}

pub fn run(command: &Command, common: &Common) -> Outcome {
    let units = Units { deg: common.deg };
    let tol = common.tol;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(format!("invalid tolerance {tol}"));
    }
    match command {
        Command::Weights { n, alpha } => weights(*n, units.angle(*alpha), tol),
        Command::Verify {
            n,
            m,
            alpha,
            weights,
            anti,
        } => verify(*n, *m, units.angle(*alpha), weights.as_deref(), *anti, tol),
        Command::Solve { n, m, alpha, single } => solve(*n, *m, units.angle(*alpha), *single, tol),
        Command::StarTriangle { n, alphas, perturb } => {
            let a: Vec<f64> = alphas.iter().map(|&x| units.angle(x)).collect();
            star_triangle(*n, &a, *perturb, tol)
        }
        Command::Lattice {
            action,
            shape,
            input,
            n,
            svg,
            save,
        } => {
            let lat = match action {
                LatticeAction::Build => build(shape, &units)?,
                LatticeAction::Load => {
                    let path = input.as_ref().ok_or("lattice load needs --input")?;
                    CoveringLattice::load_json(path).map_err(invalid)?
                }
            };
            lattice(lat, *action, shape, *n, svg.as_deref(), save.as_deref(), tol)
        }
        Command::Enumerate {
            lattice,
            check,
            n,
            m,
            face,
            anchor,
            cap,
        } => {
            let opts = EnumerationOptions {
                cap: *cap,
                workers: common.threads,
            };
            enumerate(lattice, *check, *n, *m, *face, *anchor, opts, tol)
        }
    }
}

fn weights(n: i64, alpha: f64, tol: f64) -> Outcome {
    let w = fz_weights(n, alpha).map_err(invalid)?;
    let x = w.coefficients();
    let mut table = String::from("k,x\n");
    for (k, v) in x.iter().enumerate() {
        table.push_str(&format!("{k},{v:.16e}\n"));
    }
    Ok(Report::new(
        "weights",
        json!({"n": n, "alpha": alpha}),
        json!({"x": x, "free": w.free()}),
        true,
        tol,
    )
    .with_table(table))
}

fn sector(n: i64, m: i64) -> Result<SectorIndex, String> {
    SectorIndex::new(n, m).map_err(invalid)
}

fn verify(n: i64, m: i64, alpha: f64, free: Option<&[f64]>, anti: bool, tol: f64) -> Outcome {
    let s = sector(n, m)?;
    let w = match free {
        Some(x) => WeightVector::from_free(n, x).map_err(invalid)?,
        None => fz_weights(n, alpha).map_err(invalid)?,
    };
    let face = reference_rhombus(alpha).map_err(invalid)?;
    let rep = if anti {
        antiholomorphic_residuals(&face, s, &w)
    } else {
        face_residuals(&face, s, &w)
    }
    .map_err(invalid)?;
    let residuals: Vec<Value> = rep.residuals.iter().map(|r| complex(r.re, r.im)).collect();
    let table = rep.to_csv().map_err(invalid)?;
    Ok(Report::new(
        "verify",
        json!({"n": n, "m": m, "alpha": alpha, "weights": w.free(), "anti": anti}),
        json!({"residuals": residuals, "max_abs": rep.max_abs}),
        rep.max_abs <= tol,
        tol,
    )
    .with_table(table))
}

fn solve(n: i64, m: i64, alpha: f64, single: bool, tol: f64) -> Outcome {
    let s = sector(n, m)?;
    let sol = solve_weights(
        s,
        alpha,
        SolveOptions {
            single_orientation: single,
        },
    )
    .map_err(invalid)?;
    let fz = fz_weights(n, alpha).map_err(invalid)?;
    let solution: Value = serde_json::from_str(&sol.to_json().map_err(invalid)?).map_err(invalid)?;
    let table = sol.to_csv().map_err(invalid)?;
    Ok(Report::new(
        "solve",
        json!({"n": n, "m": m, "alpha": alpha, "single": single}),
        json!({
            "solution": solution,
            "exists": sol.exists(),
            "distance_to_critical": sol.distance_to(fz.free()),
        }),
        sol.exists(),
        tol,
    )
    .with_table(table))
}

fn star_triangle(n: i64, alphas: &[f64], perturb: f64, tol: f64) -> Outcome {
    let a: [f64; 3] = alphas
        .try_into()
        .map_err(|_| format!("--alphas needs three angles, got {}", alphas.len()))?;
    let (mut star, tri) = critical_star_triangle_weights(n, a).map_err(invalid)?;
    if perturb != 0.0 {
        star[0] = star[0].perturbed(1, perturb).map_err(invalid)?;
    }
    let rep = star_triangle_check(a, &star, &tri).map_err(invalid)?;
    Ok(Report::new(
        "star-triangle",
        json!({"n": n, "alphas": a, "perturb": perturb}),
        json!({"ratio": rep.ratio, "max_dev": rep.max_dev}),
        rep.max_dev <= tol,
        tol,
    ))
}

fn build(shape: &Shape, units: &Units) -> Result<CoveringLattice, String> {
    let a1 = units.angle(shape.alpha);
    let a2 = units.angle(shape.alpha2);
    match shape.kind {
        LatticeType::Square => build_square_covering(shape.rows, shape.cols, a1),
        LatticeType::Tri => build_triangular_covering(shape.size, a1, a2),
        LatticeType::Hex => build_honeycomb_covering(shape.size, a1, a2),
        LatticeType::Multigrid => {
            let arr = match &shape.angles {
                Some(angles) => {
                    let angles: Vec<f64> = angles.iter().map(|&x| units.angle(x)).collect();
                    let offsets = match &shape.offsets {
                        Some(o) => o.clone(),
                        None => (0..angles.len()).map(|j| 0.1 + 0.17 * j as f64).collect(),
                    };
                    LineArrangement::new(angles, offsets, shape.extent)
                }
                None => LineArrangement::regular(shape.families, shape.extent),
            }
            .map_err(invalid)?;
            build_multigrid_tiling(&arr)
        }
    }
    .map_err(invalid)
}

fn lattice(
    mut lat: CoveringLattice,
    action: LatticeAction,
    shape: &Shape,
    n: Option<i64>,
    svg: Option<&std::path::Path>,
    save: Option<&std::path::Path>,
    tol: f64,
) -> Outcome {
    if let Some(n) = n {
        lat.assign_critical_weights(n).map_err(invalid)?;
    }
    let invariants = lat.check_invariants();
    if let Some(path) = svg {
        export_svg(&lat, &[], path).map_err(invalid)?;
    }
    if let Some(path) = save {
        lat.save_json(path).map_err(invalid)?;
    }
    let side_error = lat
        .edges()
        .iter()
        .map(|&(p, d)| ((lat.vertex(p).z - lat.vertex(d).z).norm() - lat.face(0).side_length()).abs())
        .fold(0.0, f64::max);
    let kind = match action {
        LatticeAction::Build => format!("{:?}", shape.kind).to_lowercase(),
        LatticeAction::Load => "file".into(),
    };
    Ok(Report::new(
        "lattice",
        json!({
            "action": format!("{action:?}").to_lowercase(),
            "type": kind,
            "n": n,
            "svg": svg.map(|p| p.display().to_string()),
            "save": save.map(|p| p.display().to_string()),
        }),
        json!({
            "primal": lat.primal_count(),
            "dual": lat.dual_count(),
            "faces": lat.faces().len(),
            "boundary": lat.boundary().len(),
            "interior_faces": lat.interior_faces().len(),
            "max_side_error": side_error,
            "invariants": invariants.as_ref().map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string()),
        }),
        invariants.is_ok(),
        tol,
    ))
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    path: &std::path::Path,
    check: Check,
    n: Option<i64>,
    m: i64,
    face: Option<usize>,
    anchor: Option<usize>,
    opts: EnumerationOptions,
    tol: f64,
) -> Outcome {
    let file = LatticeFile::load(path).map_err(invalid)?;
    let mut lat = file.to_lattice().map_err(invalid)?;
    if let Some(n) = n {
        lat.assign_critical_weights(n).map_err(invalid)?;
    }
    let modulus = lat.weights_modulus().map_err(invalid)? as i64;
    let inputs = json!({
        "lattice": path.display().to_string(),
        "check": format!("{check:?}"),
        "n": modulus,
        "m": m,
        "face": face,
        "anchor": anchor,
        "threads": opts.workers,
        "cap": opts.cap,
    });
    match check {
        Check::Partition => {
            let z = partition_function(&lat, opts).map_err(invalid)?;
            let count = (modulus as u128).pow(lat.primal_count() as u32);
            Ok(Report::new(
                "enumerate",
                inputs,
                json!({"Z": z, "config_count": count.to_string()}),
                z.is_finite() && z > 0.0,
                tol,
            ))
        }
        Check::FaceSum => {
            let s = sector(modulus, m)?;
            let faces = match face {
                Some(f) => vec![f],
                None => lat.interior_faces(),
            };
            if faces.is_empty() {
                return Err("lattice has no interior faces; pass --face".into());
            }
            let mut rows = Vec::new();
            let mut worst: f64 = 0.0;
            for f in faces {
                if f >= lat.faces().len() {
                    return Err(format!("face {f} out of range"));
                }
                let spectator = neutralizing_spectator(&lat, f, s);
                let rep = face_sum_check(&lat, f, s, &[spectator], opts).map_err(invalid)?;
                worst = worst.max(rep.residual.norm());
                rows.push(json!({
                    "face": f,
                    "residual": complex(rep.residual.re, rep.residual.im),
                    "abs": rep.residual.norm(),
                    "scale": rep.scale,
                    "spectator": [spectator.0, spectator.1],
                }));
            }
            Ok(Report::new(
                "enumerate",
                inputs,
                json!({"faces": rows, "max_abs": worst}),
                worst <= tol,
                tol,
            ))
        }
        Check::PathIndependence => {
            let s = sector(modulus, m)?;
            let (a, b) = string_pair(&lat, &file, s, anchor)?;
            let far = lat
                .ids_of(VertexKind::Primal)
                .last()
                .copied()
                .ok_or("lattice has no primal vertices")?;
            let near = lat.ids_of(VertexKind::Primal)[0];
            let spectators = [(near, m), (far, modulus - m)];
            let rep = path_independence_check(&lat, s, a.clone(), b.clone(), &spectators, opts).map_err(invalid)?;
            Ok(Report::new(
                "enumerate",
                inputs,
                json!({
                    "path_a": a,
                    "path_b": b,
                    "spectators": spectators,
                    "value_a": complex(rep.value_a.re, rep.value_a.im),
                    "value_b": complex(rep.value_b.re, rep.value_b.im),
                    "gauge": rep.gauge,
                    "deviation": rep.deviation,
                }),
                rep.deviation <= tol,
                tol,
            ))
        }
    }
}

/// Two strings from one anchor: the first two stored strings when they share
/// an anchor, otherwise a shortest path and a detour around its first step.
fn string_pair(
    lat: &CoveringLattice,
    file: &LatticeFile,
    s: SectorIndex,
    anchor: Option<usize>,
) -> Result<(Vec<usize>, Vec<usize>), String> {
    if anchor.is_none() && file.strings.len() >= 2 {
        let a = DisorderString::from_entry(lat, &file.strings[0]).map_err(invalid)?;
        let b = DisorderString::from_entry(lat, &file.strings[1]).map_err(invalid)?;
        if a.anchor() == b.anchor() {
            return Ok((a.path().to_vec(), b.path().to_vec()));
        }
    }
    let d = match anchor {
        Some(d) => d,
        None => lat
            .ids_of(VertexKind::Dual)
            .into_iter()
            .find(|d| !lat.boundary().contains(d))
            .ok_or("lattice has no interior dual vertex")?,
    };
    let a = DisorderString::to_boundary(lat, s, d).map_err(invalid)?.path().to_vec();
    if a.len() < 2 {
        return Err(format!("dual vertex {d} lies on the boundary"));
    }
    let b = lat
        .path_to_boundary_avoiding(d, &std::collections::BTreeSet::from([a[1]]))
        .map_err(invalid)?;
    Ok((a, b))
}
