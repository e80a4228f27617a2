//! Numerical thresholds shared by the library, the CLI and the acceptance suite.

/// Construction and consistency checks (weight reality, rhombus closure).
pub const CONSTRUCTION: f64 = 1e-12;

/// Geometric predicates on unit-edge embeddings.
pub const GEOMETRY: f64 = 1e-10;

/// Default threshold for an identity check to count as passing.
pub const IDENTITY: f64 = 1e-10;

/// Default threshold above which a residual is "definitely nonzero".
pub const NONZERO: f64 = 1e-3;

/// Relative singular-value cutoff for the weight solver's nullspace.
pub const SVD_CUTOFF: f64 = 1e-10;

/// Relative least-squares residual below which a weight solution exists.
pub const FIT: f64 = 1e-10;

/// Default enumeration budget in configurations.
pub const DEFAULT_CONFIG_CAP: u64 = 10_000_000;
