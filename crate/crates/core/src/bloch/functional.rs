use num_complex::Complex64;
use serde::Serialize;

use super::function::AnalyticFunction;
use crate::disc::DiscPoint;
use crate::error::{Error, Result};
use crate::range_space::{pairing, RangeSpace, VectorValue};
use crate::tolerances;

/// The embedding `F(z) = (1 - |z|^2) f'(z)` of a Bloch function into the
/// continuous functions vanishing at the circle.
#[derive(Debug, Clone, Copy)]
pub struct Embedded<'a> {
    f: &'a AnalyticFunction,
}

pub fn embed_phi(f: &AnalyticFunction) -> Embedded<'_> {
    Embedded { f }
}

impl Embedded<'_> {
    pub fn eval(&self, z: DiscPoint) -> VectorValue {
        self.eval_raw(z.value())
    }

    pub fn eval_raw(&self, z: Complex64) -> VectorValue {
        self.f.deriv_raw(z) * Complex64::from(1.0 - z.norm_sqr())
    }
}

/// `f -> e*((1 - |z|^2) f'(z))` with `||e*|| = 1` in the dual norm: these
/// are the extreme points of the dual unit ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremeFunctional {
    #[serde(serialize_with = "ser_vec")]
    pub e_star: VectorValue,
    #[serde(serialize_with = "ser_point")]
    pub z: DiscPoint,
}

fn ser_vec<S: serde::Serializer>(v: &VectorValue, s: S) -> Result<S::Ok, S::Error> {
    crate::json::vector_to_pairs(v).serialize(s)
}

fn ser_point<S: serde::Serializer>(p: &DiscPoint, s: S) -> Result<S::Ok, S::Error> {
    crate::json::to_pair(p.value()).serialize(s)
}

impl ExtremeFunctional {
    pub fn new(space: &RangeSpace, e_star: VectorValue, z: DiscPoint) -> Result<Self> {
        let n = space.dual_norm(&e_star)?;
        if (n - 1.0).abs() > tolerances::ALGEBRAIC_LOOSE {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { e_star, z })
    }

    /// The functional norming `e` at `z`.
    pub fn supporting(space: &RangeSpace, e: &VectorValue, z: DiscPoint) -> Result<Self> {
        Ok(Self { e_star: space.support_functional(e)?, z })
    }

    pub fn apply(&self, f: &AnalyticFunction) -> Complex64 {
        pairing(&self.e_star, &embed_phi(f).eval(self.z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_of_linear_function() {
        let v = VectorValue::from_vec(vec![Complex64::new(1.0, -1.0)]);
        let f = AnalyticFunction::monomial(1, v.clone());
        let z = DiscPoint::from_parts(0.3, 0.4).unwrap();
        assert!((embed_phi(&f).eval(z) - &v * Complex64::from(0.75)).norm() < 1e-15);
        assert_eq!(embed_phi(&f).eval(DiscPoint::origin()), f.deriv(DiscPoint::origin()));
    }

    #[test]
    fn witness_is_normed_by_its_functional() {
        let s = RangeSpace::new(3, 2.5).unwrap();
        let e = VectorValue::from_vec(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0), Complex64::new(0.0, 0.3)]);
        let e = &e * Complex64::from(1.0 / s.norm(&e).unwrap());
        let z0 = DiscPoint::from_parts(0.2, -0.7).unwrap();
        let xi = ExtremeFunctional::supporting(&s, &e, z0).unwrap();
        let val = xi.apply(&AnalyticFunction::witness(z0, e));
        assert!((val - Complex64::from(1.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_unit_functionals() {
        let s = RangeSpace::euclidean(2);
        let u = VectorValue::from_vec(vec![Complex64::from(1.0), Complex64::from(1.0)]);
        assert!(ExtremeFunctional::new(&s, u, DiscPoint::origin()).is_err());
    }
}
