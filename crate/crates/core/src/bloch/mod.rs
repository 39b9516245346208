//! Vector-valued analytic functions on the disc, Bloch norms, the embedding
//! `f -> (1 - |z|^2) f'` and the extreme functionals of the dual ball.

mod function;
mod functional;
mod norm;

pub use function::{AnalyticFunction, FunctionDescriptor, Scale, Term, TermDescriptor};
pub use functional::{embed_phi, Embedded, ExtremeFunctional};
pub use norm::{
    bloch_norm_star, bloch_seminorm, little_bloch_check, maximize_on_disc, weighted_derivative, GridParams,
    NormEstimate, RingMax,
};
