//! Discrete holomorphicity of the parafermions on single faces.

mod residuals;
mod rigidity;
mod solver;
mod star_triangle;

pub use residuals::{antiholomorphic_residuals, disorder_ratio, face_residuals, ResidualReport};
pub use rigidity::{kite, quadrilateral_rigidity_check, RigidityReport, RigidityRow};
pub use solver::{solve_face, solve_weights, SolveOptions, WeightSolution};
pub use star_triangle::{
    critical_star_triangle, critical_star_triangle_weights, star_triangle_check, StarTriangleReport,
};

/// Phase-weighted increments `e^{-ipθ_e} δz_e` of the face, in edge order
/// `(P1,D1), (P2,D1), (P2,D2), (P1,D2)`.
pub(crate) fn contour_terms(
    rh: &crate::geometry::RhombusGeometry,
    sector: crate::clock::SectorIndex,
) -> [num_complex::Complex64; 4] {
    residuals::contour_coefficients(rh, sector, false)
}
