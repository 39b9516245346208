//! The checks behind `run_suite`, grouped by suite.

mod bloch;
mod disc;
pub(crate) mod gbp;
pub(crate) mod generator;
mod group;
mod isometry;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use super::{corpus, SuiteConfig, VerificationReport};
use crate::bloch::AnalyticFunction;
use crate::disc::{AutomorphismFlow, DiscPoint, MobiusAutomorphism};
use crate::error::Result;
use crate::operators::sampling;
use crate::range_space::RangeSpace;

pub(crate) type Check = fn(&Ctx) -> Result<Vec<VerificationReport>>;

pub(crate) fn checks(suite: &str) -> Option<&'static [(&'static str, Check)]> {
    Some(match suite {
        "disc" => disc::CHECKS,
        "bloch" => bloch::CHECKS,
        "isometry" => isometry::CHECKS,
        "group" => group::CHECKS,
        "generator" => generator::CHECKS,
        "gbp" => gbp::CHECKS,
        _ => return None,
    })
}

pub use gbp::sweep_lambdas;
pub(crate) use generator::ORDER_TIMES;

pub const SUITES: [&str; 6] = ["disc", "bloch", "isometry", "group", "generator", "gbp"];

/// Shared inputs of every check in a run.
pub(crate) struct Ctx<'a> {
    pub cfg: &'a SuiteConfig,
    pub space: RangeSpace,
    pub corpus: Vec<AnalyticFunction>,
    pub nodes: Vec<Complex64>,
}

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a SuiteConfig) -> Result<Self> {
        Ok(Self {
            cfg,
            space: cfg.range_space()?,
            corpus: corpus::generate_test_functions(cfg)?,
            nodes: sampling::default_nodes(),
        })
    }

    /// An RNG private to one check, so adding checks never shifts the
    /// streams of the others.
    pub fn rng(&self, check: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed ^ fnv1a(check.as_bytes()))
    }

    pub fn report(&self, name: impl Into<String>, params: Value, residual: f64, tolerance: f64, samples: usize) -> VerificationReport {
        let name = name.into();
        let tol = self.cfg.tolerances.for_check(&name, tolerance);
        VerificationReport::new(name, params, residual, tol, samples, self.cfg.seed)
    }

    pub fn basis(&self) -> Vec<AnalyticFunction> {
        corpus::basis_functions(self.space.dim(), self.cfg.basis_degree)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// One representative flow of each nontrivial kind.
pub fn sample_flows() -> [AutomorphismFlow; 3] {
    [
        AutomorphismFlow::elliptic(0.9, Complex64::new(0.3, -0.2)).expect("valid"),
        AutomorphismFlow::hyperbolic(1.1, Complex64::from_polar(1.0, 0.3), Complex64::from_polar(1.0, 2.4)).expect("valid"),
        AutomorphismFlow::parabolic(0.7, Complex64::from_polar(1.0, -0.8)).expect("valid"),
    ]
}

pub(crate) fn random_phase<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Uniform point of the disc of radius `rmax`.
pub(crate) fn random_point<R: Rng>(rng: &mut R, rmax: f64) -> DiscPoint {
    let r = rmax * rng.random::<f64>().sqrt();
    DiscPoint::new(Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))).expect("rmax < 1")
}

pub(crate) fn random_automorphism<R: Rng>(rng: &mut R, amax: f64) -> MobiusAutomorphism {
    let lambda = random_phase(rng);
    MobiusAutomorphism::from_canonical(lambda, random_point(rng, amax).value()).expect("valid canonical form")
}

/// Involutive automorphism `z -> -(z - a)/(1 - conj(a) z)`.
pub(crate) fn random_involution<R: Rng>(rng: &mut R, amax: f64) -> MobiusAutomorphism {
    MobiusAutomorphism::from_canonical(Complex64::new(-1.0, 0.0), random_point(rng, amax).value()).expect("valid canonical form")
}

/// Minimal observed order `log2(r_k / r_{k+1})` for a halving sequence.
pub(crate) fn observed_order(residuals: &[f64]) -> f64 {
    residuals.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min)
}

/// Number of places where a sequence fails to decrease strictly.
pub(crate) fn non_decreasing_steps(xs: &[f64]) -> usize {
    xs.windows(2).filter(|w| !(w[1] < w[0])).count()
}

/// Number of steps where `xs` fails to strictly increase.
pub(crate) fn non_increasing_steps(xs: &[f64]) -> usize {
    xs.windows(2).filter(|w| !(w[1] > w[0])).count()
}
