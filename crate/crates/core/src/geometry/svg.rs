use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use super::{CoveringLattice, VertexKind};
use crate::error::{Error, Result};

const SCALE: f64 = 60.0;
const MARGIN: f64 = 20.0;

/// Renders the lattice as SVG: one polygon per face, covering edges, dashed
/// primal edges, vertex circles, and the given dual paths as string segments.
pub fn to_svg(lat: &CoveringLattice, strings: &[Vec<usize>]) -> Result<String> {
    let pts: Vec<Complex64> = lat.vertices().iter().map(|v| v.z).collect();
    if pts.is_empty() {
        return Err(Error::InvalidLattice("nothing to draw".into()));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in &pts {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let map = |z: Complex64| ((z.re - x0) * SCALE + MARGIN, (y1 - z.im) * SCALE + MARGIN);
    let width = (x1 - x0) * SCALE + 2.0 * MARGIN;
    let height = (y1 - y0) * SCALE + 2.0 * MARGIN;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.9} {height:.9}">"#
    );
    let _ = writeln!(
        s,
        "<style>.face{{fill:#f4f1e8;stroke:#555;stroke-width:1}} .primal-edge{{stroke:#000;stroke-width:1.5;stroke-dasharray:6,4}} \
         .primal{{fill:#000}} .dual{{fill:#fff;stroke:#000}} .string{{stroke:#c22;stroke-width:2;stroke-dasharray:2,3}}</style>"
    );
    for (i, f) in lat.faces().iter().enumerate() {
        let coords: Vec<String> = f
            .points()
            .iter()
            .map(|&z| {
                let (x, y) = map(z);
                format!("{x:.9},{y:.9}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon class="face" data-face="{i}" points="{}"/>"#,
            coords.join(" ")
        );
    }
    for e in lat.primal_edges() {
        let (ax, ay) = map(pts[e.p1]);
        let (bx, by) = map(pts[e.p2]);
        let _ = writeln!(
            s,
            r#"<line class="primal-edge" x1="{ax:.9}" y1="{ay:.9}" x2="{bx:.9}" y2="{by:.9}"/>"#
        );
    }
    for path in strings {
        for w in path.windows(2) {
            if w[0] >= pts.len() || w[1] >= pts.len() {
                return Err(Error::InvalidString(format!("path step {w:?} out of range")));
            }
            let (ax, ay) = map(pts[w[0]]);
            let (bx, by) = map(pts[w[1]]);
            let _ = writeln!(
                s,
                r#"<line class="string" x1="{ax:.9}" y1="{ay:.9}" x2="{bx:.9}" y2="{by:.9}"/>"#
            );
        }
    }
    for v in lat.vertices() {
        let (x, y) = map(v.z);
        let class = match v.kind {
            VertexKind::Primal => "primal",
            VertexKind::Dual => "dual",
        };
        let _ = writeln!(
            s,
            r#"<circle class="{class}" data-id="{}" cx="{x:.9}" cy="{y:.9}" r="4"/>"#,
            v.id
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn export_svg(lat: &CoveringLattice, strings: &[Vec<usize>], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_svg(lat, strings)?)?;
    Ok(())
}
