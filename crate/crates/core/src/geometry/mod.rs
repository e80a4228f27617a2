//! Covering lattices with rhombic embeddings.
//!
//! The covering lattice has the spin (primal) sites and the disorder (dual)
//! sites as vertices; every face is a rhombus whose diagonals are one primal
//! edge and the dual edge crossing it.

mod builders;
mod flip;
mod io;
mod lattice;
mod multigrid;
mod rhombus;
mod svg;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use builders::{build_honeycomb_covering, build_square_covering, build_triangular_covering};
pub use flip::{find_flippable_hexagons, hexagon_flip};
pub use io::{LatticeFile, StringEntry, VertexEntry};
pub use lattice::{CoveringLattice, DualStep, PrimalEdge};
pub use multigrid::{build_multigrid_tiling, LineArrangement};
pub use rhombus::{reference_rhombus, theta_of, wrap_angle, RhombusGeometry};
pub use svg::{export_svg, to_svg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Primal,
    Dual,
}

impl VertexKind {
    pub fn other(self) -> Self {
        match self {
            VertexKind::Primal => VertexKind::Dual,
            VertexKind::Dual => VertexKind::Primal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    pub kind: VertexKind,
    pub z: Complex64,
}

impl VertexRecord {
    pub fn new(id: usize, kind: VertexKind, z: Complex64) -> Self {
        Self { id, kind, z }
    }
}
