//! Pointwise comparison of functions on a fixed node set.

use num_complex::Complex64;

use crate::bloch::{AnalyticFunction, GridParams};
use crate::range_space::{RangeSpace, VectorValue};

/// The nodes on which operator identities are compared by default.
pub fn default_nodes() -> Vec<Complex64> {
    GridParams { n_radii: 24, n_angles: 32, refinement_rounds: 0 }.nodes()
}

/// `max_z ||g(z)||` over the nodes.
pub fn sup_on<G>(space: &RangeSpace, nodes: &[Complex64], g: G) -> f64
where
    G: Fn(Complex64) -> VectorValue,
{
    nodes.iter().map(|&z| space.norm_unchecked(&g(z))).fold(0.0, f64::max)
}

/// Sampled `B*` distance: `||f(0) - g(0)|| + max_z (1 - |z|^2) ||f'(z) - g'(z)||`.
pub fn sampled_distance(space: &RangeSpace, f: &AnalyticFunction, g: &AnalyticFunction, nodes: &[Complex64]) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let at0 = space.norm_unchecked(&(f.eval_raw(zero) - g.eval_raw(zero)));
    at0 + sup_on(space, nodes, |z| (f.deriv_raw(z) - g.deriv_raw(z)) * Complex64::from(1.0 - z.norm_sqr()))
}

/// Sampled `B*` norm of a single function.
pub fn sampled_norm(space: &RangeSpace, f: &AnalyticFunction, nodes: &[Complex64]) -> f64 {
    let at0 = space.norm_unchecked(&f.eval_raw(Complex64::new(0.0, 0.0)));
    at0 + sup_on(space, nodes, |z| f.deriv_raw(z) * Complex64::from(1.0 - z.norm_sqr()))
}
