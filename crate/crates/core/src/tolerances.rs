//! Numerical thresholds shared by the library, the suites and the CLI.

/// Interior-point admission: points with `|z| >= 1 - BOUNDARY` are rejected.
pub const BOUNDARY: f64 = 1e-9;

/// Smallest admissible Möbius denominator `|c z + d|`.
pub const DENOMINATOR: f64 = 1e-14;

/// Algebraic identities that only accumulate a handful of roundings.
pub const ALGEBRAIC: f64 = 1e-12;

/// Algebraic identities composed through several maps (group laws, inverses).
pub const ALGEBRAIC_LOOSE: f64 = 1e-10;

/// Identities between two independently grid-estimated suprema.
pub const NORM: f64 = 1e-6;

/// Falsification floor: a residual above this is a genuine violation.
pub const FALSIFICATION: f64 = 1e-3;

/// Fixed points with `||ζ| - 1| < CLASSIFY_MARGIN` count as boundary points.
pub const CLASSIFY_MARGIN: f64 = 1e-6;

/// Membership test `f(0) = 0` for the vanishing-at-zero subspace.
pub const VANISHING: f64 = 1e-12;

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-4;
