use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::complex_pair;
use crate::tolerances;

/// A point of the open unit disc, kept at distance at least
/// [`tolerances::BOUNDARY`] from the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() >= 1.0 - tolerances::BOUNDARY {
            return Err(Error::BoundaryPoint { re: z.re, im: z.im });
        }
        Ok(Self(z))
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, theta))
    }

    pub const fn origin() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    /// `1 - |z|^2`.
    pub fn weight(self) -> f64 {
        1.0 - self.0.norm_sqr()
    }
}

impl From<DiscPoint> for Complex64 {
    fn from(p: DiscPoint) -> Self {
        p.0
    }
}

impl fmt::Display for DiscPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.0.re, self.0.im)
    }
}

/// Canonical form `z -> lambda (z - a) / (1 - conj(a) z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    #[serde(with = "complex_pair")]
    pub lambda: Complex64,
    #[serde(with = "complex_pair")]
    pub a: Complex64,
}

/// A disc automorphism stored as a 2x2 matrix `[[a, b], [c, d]]` acting by
/// `z -> (a z + b) / (c z + d)`, normalized to `det = 1`.
///
/// Every automorphism of the disc normalizes to the form
/// `[[a, b], [conj(b), conj(a)]]` with `|a|^2 - |b|^2 = 1`; the matrix is only
/// defined up to sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusAutomorphism {
    m: [Complex64; 4],
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn normalize(m: [Complex64; 4]) -> Result<[Complex64; 4]> {
    let det = m[0] * m[3] - m[1] * m[2];
    if !(det.norm() > 0.0 && det.norm().is_finite()) {
        return Err(Error::NotAutomorphism(format!("singular matrix (det = {det})")));
    }
    let k = det.sqrt().inv();
    Ok(m.map(|x| x * k))
}

impl MobiusAutomorphism {
    pub fn identity() -> Self {
        Self { m: [ONE, ZERO, ZERO, ONE] }
    }

    /// Rotation `z -> mu z`; `mu` must be unimodular.
    pub fn rotation(mu: Complex64) -> Result<Self> {
        Self::from_canonical(mu, ZERO)
    }

    /// Builds `z -> lambda (z - a) / (1 - conj(a) z)`.
    pub fn from_canonical(lambda: Complex64, a: Complex64) -> Result<Self> {
        if (lambda.norm() - 1.0).abs() > tolerances::ALGEBRAIC_LOOSE {
            return Err(Error::NotUnimodular(lambda.norm()));
        }
        if !(a.norm() < 1.0) {
            return Err(Error::NotAutomorphism(format!("|a| = {} is not < 1", a.norm())));
        }
        let m = normalize([lambda, -lambda * a, -a.conj(), ONE])?;
        Ok(Self { m })
    }

    /// Accepts an arbitrary nonsingular matrix and certifies that, after
    /// normalization, it maps the disc onto itself.
    pub fn from_matrix(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = normalize([a, b, c, d])?;
        let [a, b, c, d] = m;
        let scale = 1.0 + a.norm_sqr() + b.norm_sqr();
        let tol = tolerances::ALGEBRAIC_LOOSE * scale;
        let defects = [
            (a.norm() - d.norm()).abs(),
            (b.norm() - c.norm()).abs(),
            (a.norm_sqr() - b.norm_sqr() - 1.0).abs(),
        ];
        if let Some(bad) = defects.iter().copied().find(|&x| !(x <= tol)) {
            return Err(Error::NotAutomorphism(format!(
                "normalized matrix violates |a|=|d|, |b|=|c|, |a|^2-|b|^2=1 (defect {bad:e})"
            )));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> [Complex64; 4] {
        self.m
    }

    pub fn det(&self) -> Complex64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    /// Extracts `(lambda, a)` with `|lambda| = 1`, `|a| < 1`.
    pub fn canonical(&self) -> CanonicalForm {
        let [a, b, _, d] = self.m;
        // (a z + b)/(c z + d) = (a/d) (z + b/a) / (1 + (c/d) z), and |a| >= 1
        // after normalization.
        let lambda = a / d;
        CanonicalForm {
            lambda: lambda / lambda.norm(),
            a: -b / a,
        }
    }

    fn denominator(&self, z: Complex64) -> Complex64 {
        self.m[2] * z + self.m[3]
    }

    /// Raw evaluation without any admission checks.
    pub fn map(&self, z: Complex64) -> Complex64 {
        (self.m[0] * z + self.m[1]) / self.denominator(z)
    }

    /// Raw derivative `det / (c z + d)^2`.
    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        let den = self.denominator(z);
        self.det() / (den * den)
    }

    pub fn apply(&self, z: DiscPoint) -> Result<DiscPoint> {
        let den = self.denominator(z.value());
        if den.norm() < tolerances::DENOMINATOR {
            return Err(Error::DegenerateMap(den.norm()));
        }
        DiscPoint::new((self.m[0] * z.value() + self.m[1]) / den)
    }

    pub fn derivative(&self, z: DiscPoint) -> Result<Complex64> {
        let den = self.denominator(z.value());
        if den.norm() < tolerances::DENOMINATOR {
            return Err(Error::DegenerateMap(den.norm()));
        }
        Ok(self.det() / (den * den))
    }

    /// `self ∘ other`: `z -> self(other(z))`.
    pub fn compose(&self, other: &Self) -> Self {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        let m = [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h];
        // A product of two unit-determinant matrices only drifts by rounding.
        Self {
            m: normalize(m).unwrap_or(m),
        }
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        let m = [d, -b, -c, a];
        Self {
            m: normalize(m).unwrap_or(m),
        }
    }

    /// Projective distance: the matrix is only defined up to sign.
    pub fn distance(&self, other: &Self) -> f64 {
        let minus = self
            .m
            .iter()
            .zip(other.m.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        let plus = self
            .m
            .iter()
            .zip(other.m.iter())
            .map(|(x, y)| (x + y).norm())
            .fold(0.0, f64::max);
        minus.min(plus)
    }

    /// `|(1 - |z|^2) |σ'(z)| - (1 - |σ(z)|^2)|`, which vanishes identically for
    /// disc automorphisms.
    pub fn weight_identity_residual(&self, z: DiscPoint) -> f64 {
        let w = self.map(z.value());
        let lhs = z.weight() * self.derivative_at(z.value()).norm();
        let rhs = 1.0 - w.norm_sqr();
        (lhs - rhs).abs()
    }
}

impl fmt::Display for MobiusAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        write!(f, "z -> ({})(z - {})/(1 - conj({}) z)", c.lambda, c.a, c.a)
    }
}

impl Serialize for MobiusAutomorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.canonical().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MobiusAutomorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let c = CanonicalForm::deserialize(d)?;
        Self::from_canonical(c.lambda, c.a).map_err(serde::de::Error::custom)
    }
}
