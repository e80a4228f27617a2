//! Discretely holomorphic parafermions for nearest-neighbour Z_N clock models.
//!
//! The crate builds rhombically embedded covering lattices, evaluates the
//! discrete contour identity face by face and on whole lattices by exact
//! enumeration, and solves for the edge weights that make it hold.

pub mod cft;
pub mod clock;
pub mod enumeration;
pub mod error;
pub mod geometry;
pub mod holomorphy;
pub mod tolerances;
pub mod weights;

pub use cft::{central_charge, conformal_spin};
pub use clock::{omega, CyclicValue, SectorIndex};
pub use error::{Error, Result};
pub use weights::{fz_weights, weight_eval, WeightVector};
