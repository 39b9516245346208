use num_complex::Complex64;
use serde::Serialize;

use super::mobius::MobiusAutomorphism;
use crate::json::{to_pair, Pair};
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AutomorphismType {
    Identity,
    Elliptic,
    Hyperbolic,
    Parabolic,
}

/// Fixed-point evidence behind a classification.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub kind: AutomorphismType,
    /// Roots of `c z^2 + (d - a) z - b = 0`; empty for the identity, and a
    /// single entry for a rotation's interior fixed point (the other is ∞).
    #[serde(serialize_with = "ser_points")]
    pub fixed_points: Vec<Complex64>,
    /// `||ζ| - 1|` for each fixed point, in the same order.
    pub boundary_distances: Vec<f64>,
    /// Smallest distance between the boundary test threshold and any
    /// `||ζ| - 1|`; small values mean the decision was close.
    pub margin: f64,
}

fn ser_points<S: serde::Serializer>(pts: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Pair> = pts.iter().copied().map(to_pair).collect();
    v.serialize(s)
}

impl Classification {
    fn new(kind: AutomorphismType, fixed_points: Vec<Complex64>) -> Self {
        let boundary_distances: Vec<f64> =
            fixed_points.iter().map(|z| (z.norm() - 1.0).abs()).collect();
        let margin = boundary_distances
            .iter()
            .map(|d| (d - tolerances::CLASSIFY_MARGIN).abs())
            .fold(f64::INFINITY, f64::min);
        Self { kind, fixed_points, boundary_distances, margin }
    }
}

/// Classifies by location of the fixed points: interior + exterior is
/// elliptic, two distinct boundary points hyperbolic, a boundary double root
/// parabolic.
pub fn classify_automorphism(m: &MobiusAutomorphism) -> Classification {
    let [a, b, c, d] = m.matrix();
    let scale = a.norm().max(b.norm()).max(1.0);
    let tiny = tolerances::ALGEBRAIC_LOOSE * scale;

    if c.norm() <= tiny && b.norm() <= tiny {
        if (a - d).norm() <= tiny {
            return Classification::new(AutomorphismType::Identity, Vec::new());
        }
        // Rotation: 0 and ∞ are fixed.
        return Classification::new(AutomorphismType::Elliptic, vec![Complex64::new(0.0, 0.0)]);
    }

    // c z^2 + (d - a) z - b = 0
    let p = d - a;
    let disc_sq = p * p + 4.0 * b * c;
    let on_boundary = |z: Complex64| (z.norm() - 1.0).abs() < tolerances::CLASSIFY_MARGIN;

    // A discriminant at rounding level is a double root; taking its square
    // root would only amplify the noise.
    if disc_sq.norm() <= tolerances::ALGEBRAIC_LOOSE * scale * scale {
        let z = -p / (2.0 * c);
        let kind = if on_boundary(z) { AutomorphismType::Parabolic } else { AutomorphismType::Elliptic };
        return Classification::new(kind, vec![z]);
    }
    let disc = disc_sq.sqrt();
    // Pick the numerically stable pairing of roots.
    let q = if (p.conj() * disc).re >= 0.0 { -(p + disc) / 2.0 } else { -(p - disc) / 2.0 };
    let (z1, z2) = (q / c, -b / q);

    let kind = match (on_boundary(z1), on_boundary(z2)) {
        (true, true) if (z1 - z2).norm() < tolerances::CLASSIFY_MARGIN => AutomorphismType::Parabolic,
        (true, true) => AutomorphismType::Hyperbolic,
        _ => AutomorphismType::Elliptic,
    };
    let pts = match kind {
        AutomorphismType::Parabolic => vec![(z1 + z2) / 2.0],
        _ if z1.norm() <= z2.norm() => vec![z1, z2],
        _ => vec![z2, z1],
    };
    Classification::new(kind, pts)
}
