use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mobius::{DiscPoint, MobiusAutomorphism};
use crate::error::{Error, Result};
use crate::json::opt_complex_pair;
use crate::tolerances;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The four kinds of continuous one-parameter groups of disc automorphisms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlowKind {
    Identity,
    /// Rotation-like flow around the interior fixed point `tau`.
    Elliptic { c: f64, tau: Complex64 },
    /// Flow with repelling boundary point `alpha` and attracting `beta` (for `c > 0`).
    Hyperbolic { c: f64, alpha: Complex64, beta: Complex64 },
    /// Flow with a single boundary fixed point `alpha`.
    Parabolic { c: f64, alpha: Complex64 },
}

/// A validated one-parameter group `t -> φ_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutomorphismFlow {
    kind: FlowKind,
}

fn unimodular(name: &str, z: Complex64) -> Result<()> {
    if (z.norm() - 1.0).abs() > tolerances::ALGEBRAIC_LOOSE {
        return Err(Error::InvalidFlow(format!("|{name}| = {} must be 1", z.norm())));
    }
    Ok(())
}

fn nonzero_finite(c: f64) -> Result<()> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidFlow(format!("rate c = {c} must be finite and nonzero")));
    }
    Ok(())
}

impl AutomorphismFlow {
    pub fn new(kind: FlowKind) -> Result<Self> {
        match kind {
            FlowKind::Identity => {}
            FlowKind::Elliptic { c, tau } => {
                nonzero_finite(c)?;
                if !(tau.norm() < 1.0) {
                    return Err(Error::InvalidFlow(format!("|tau| = {} must be < 1", tau.norm())));
                }
            }
            FlowKind::Hyperbolic { c, alpha, beta } => {
                if !(c > 0.0 && c.is_finite()) {
                    return Err(Error::InvalidFlow(format!("hyperbolic rate c = {c} must be positive")));
                }
                unimodular("alpha", alpha)?;
                unimodular("beta", beta)?;
                if (alpha - beta).norm() < tolerances::CLASSIFY_MARGIN {
                    return Err(Error::InvalidFlow("hyperbolic flow needs alpha != beta".into()));
                }
            }
            FlowKind::Parabolic { c, alpha } => {
                nonzero_finite(c)?;
                unimodular("alpha", alpha)?;
            }
        }
        Ok(Self { kind })
    }

    pub fn identity() -> Self {
        Self { kind: FlowKind::Identity }
    }

    pub fn elliptic(c: f64, tau: Complex64) -> Result<Self> {
        Self::new(FlowKind::Elliptic { c, tau })
    }

    pub fn hyperbolic(c: f64, alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::new(FlowKind::Hyperbolic { c, alpha, beta })
    }

    pub fn parabolic(c: f64, alpha: Complex64) -> Result<Self> {
        Self::new(FlowKind::Parabolic { c, alpha })
    }

    pub fn kind(&self) -> FlowKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FlowKind::Identity => "identity",
            FlowKind::Elliptic { .. } => "elliptic",
            FlowKind::Hyperbolic { .. } => "hyperbolic",
            FlowKind::Parabolic { .. } => "parabolic",
        }
    }

    /// `φ_t` from the closed-form family of the flow's kind.
    pub fn at(&self, t: f64) -> MobiusAutomorphism {
        let matrix = match self.kind {
            FlowKind::Identity => return MobiusAutomorphism::identity(),
            FlowKind::Elliptic { c, tau } => {
                let e = (I * c * t).exp();
                let t2 = tau.norm_sqr();
                [e - t2, -tau * (e - ONE), -tau.conj() * (ONE - e), ONE - t2 * e]
            }
            FlowKind::Hyperbolic { c, alpha, beta } => {
                let e = Complex64::from((c * t).exp());
                [beta * e - alpha, alpha * beta * (ONE - e), e - ONE, beta - alpha * e]
            }
            FlowKind::Parabolic { c, alpha } => {
                let k = I * c * t;
                [ONE - k, k * alpha, -k * alpha.conj(), ONE + k]
            }
        };
        let [a, b, c, d] = matrix;
        // Parameters were validated, so every member of the family is an
        // automorphism up to rounding.
        MobiusAutomorphism::from_matrix(a, b, c, d)
            .expect("closed-form flow member is a disc automorphism")
    }

    pub fn invariant_polynomial(&self) -> InvariantQuadratic {
        let zero = Complex64::new(0.0, 0.0);
        match self.kind {
            FlowKind::Identity => InvariantQuadratic::new(zero, zero, zero),
            FlowKind::Elliptic { c, tau } => {
                // -ic/(1-|tau|^2) (conj(tau) z - 1)(z - tau)
                let k = -I * c / (1.0 - tau.norm_sqr());
                let t2 = tau.norm_sqr();
                InvariantQuadratic::new(k * tau.conj(), k * -(ONE + t2), k * tau)
            }
            FlowKind::Hyperbolic { c, alpha, beta } => {
                // -c/(beta - alpha) (z^2 - (alpha + beta) z + alpha beta)
                let k = -Complex64::from(c) / (beta - alpha);
                InvariantQuadratic::new(k, -k * (alpha + beta), k * alpha * beta)
            }
            FlowKind::Parabolic { c, alpha } => {
                // i conj(alpha) c (z - alpha)^2
                let k = I * alpha.conj() * c;
                InvariantQuadratic::new(k, -2.0 * k * alpha, k * alpha * alpha)
            }
        }
    }

    /// Central difference `(φ_h(z) - φ_{-h}(z)) / 2h`.
    pub fn generator_fd(&self, z: DiscPoint, h: f64) -> Result<Complex64> {
        let fwd = self.at(h).apply(z)?;
        let bwd = self.at(-h).apply(z)?;
        Ok((fwd.value() - bwd.value()) / (2.0 * h))
    }
}

/// `P(z) = q2 z^2 + q1 z + q0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantQuadratic {
    pub q2: Complex64,
    pub q1: Complex64,
    pub q0: Complex64,
}

impl InvariantQuadratic {
    pub fn new(q2: Complex64, q1: Complex64, q0: Complex64) -> Self {
        Self { q2, q1, q0 }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.q2 * z + self.q1) * z + self.q0
    }

    pub fn is_zero(&self) -> bool {
        self.q2.norm() + self.q1.norm() + self.q0.norm() == 0.0
    }
}

/// Wire form `{"kind": ..., "c": ..., "tau": [re, im], "alpha": ..., "beta": ...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowDescriptor {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, with = "opt_complex_pair", skip_serializing_if = "Option::is_none")]
    pub tau: Option<Complex64>,
    #[serde(default, with = "opt_complex_pair", skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Complex64>,
    #[serde(default, with = "opt_complex_pair", skip_serializing_if = "Option::is_none")]
    pub beta: Option<Complex64>,
}

impl From<&AutomorphismFlow> for FlowDescriptor {
    fn from(flow: &AutomorphismFlow) -> Self {
        let mut d = FlowDescriptor {
            kind: flow.name().to_string(),
            c: None,
            tau: None,
            alpha: None,
            beta: None,
        };
        match flow.kind {
            FlowKind::Identity => {}
            FlowKind::Elliptic { c, tau } => {
                d.c = Some(c);
                d.tau = Some(tau);
            }
            FlowKind::Hyperbolic { c, alpha, beta } => {
                d.c = Some(c);
                d.alpha = Some(alpha);
                d.beta = Some(beta);
            }
            FlowKind::Parabolic { c, alpha } => {
                d.c = Some(c);
                d.alpha = Some(alpha);
            }
        }
        d
    }
}

impl TryFrom<FlowDescriptor> for AutomorphismFlow {
    type Error = Error;

    fn try_from(d: FlowDescriptor) -> Result<Self> {
        let need = |field: &str| Error::Descriptor(format!("{} flow requires `{field}`", d.kind));
        let kind = match d.kind.as_str() {
            "identity" => FlowKind::Identity,
            "elliptic" => FlowKind::Elliptic {
                c: d.c.ok_or_else(|| need("c"))?,
                tau: d.tau.ok_or_else(|| need("tau"))?,
            },
            "hyperbolic" => FlowKind::Hyperbolic {
                c: d.c.ok_or_else(|| need("c"))?,
                alpha: d.alpha.ok_or_else(|| need("alpha"))?,
                beta: d.beta.ok_or_else(|| need("beta"))?,
            },
            "parabolic" => FlowKind::Parabolic {
                c: d.c.ok_or_else(|| need("c"))?,
                alpha: d.alpha.ok_or_else(|| need("alpha"))?,
            },
            other => return Err(Error::Descriptor(format!("unknown flow kind `{other}`"))),
        };
        AutomorphismFlow::new(kind)
    }
}

impl Serialize for AutomorphismFlow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FlowDescriptor::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AutomorphismFlow {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = FlowDescriptor::deserialize(d)?;
        AutomorphismFlow::try_from(desc).map_err(serde::de::Error::custom)
    }
}
