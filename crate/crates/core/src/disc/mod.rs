//! Disc automorphisms as normalized 2x2 matrices, their one-parameter flows
//! and the invariant quadratic of each flow.

mod classify;
mod flow;
mod mobius;

pub use classify::{classify_automorphism, AutomorphismType, Classification};
pub use flow::{AutomorphismFlow, FlowDescriptor, FlowKind, InvariantQuadratic};
pub use mobius::{CanonicalForm, DiscPoint, MobiusAutomorphism};
