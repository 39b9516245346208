//! Generalized bi-circular projections `P = (T - λI)/(1 - λ)`.
//!
//! Only the reflection form (`T^2 = I`, `λ = -1`) can be constructed; other
//! pairs `(T, λ)` are only reachable through [`gbp_quadratic_residual`].

use num_complex::Complex64;

use super::sampling::{sampled_distance, sup_on};
use super::BlochOperator;
use crate::bloch::{AnalyticFunction, Scale};
use crate::disc::MobiusAutomorphism;
use crate::error::{Error, Result};
use crate::range_space::{ELinearMap, RangeSpace};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct GbProjection {
    pub(crate) t: Box<BlochOperator>,
    pub(crate) lambda: Complex64,
}

impl GbProjection {
    pub fn reflection(&self) -> &BlochOperator {
        &self.t
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// `(T f - λ f) / (1 - λ)`.
    pub fn apply(&self, f: &AnalyticFunction) -> Result<AnalyticFunction> {
        let tf = self.t.apply(f)?;
        let k = (1.0 - self.lambda).inv();
        AnalyticFunction::linear_combination(vec![
            AnalyticFunction::term(Scale::Scalar(k), tf),
            AnalyticFunction::term(Scale::Scalar(-self.lambda * k), f.clone()),
        ])
    }
}

fn square_defect(m: &ELinearMap) -> f64 {
    m.compose(m).max_entry_distance(&ELinearMap::identity(m.dim()))
}

fn involution_defect(sigma: &MobiusAutomorphism) -> f64 {
    sigma.compose(sigma).distance(&MobiusAutomorphism::identity())
}

/// Algebraic defect of `T^2 = I`: entrywise `S^2 - I` and the projective
/// distance of `σ∘σ` from the identity.
pub fn reflection_residual(t: &BlochOperator) -> Result<f64> {
    match t {
        BlochOperator::CompositionIsometryB0(op) => Ok(square_defect(&op.s).max(involution_defect(&op.sigma))),
        BlochOperator::StarIsometry(op) => {
            Ok(square_defect(&op.u).max(square_defect(&op.v)).max(involution_defect(&op.sigma)))
        }
        _ => Err(Error::Unsupported("reflections must be isometry operators".into())),
    }
}

/// `P = (I + T)/2` for an isometric reflection `T`.
pub fn gbp_from_reflection(t: BlochOperator) -> Result<GbProjection> {
    let residual = reflection_residual(&t)?;
    if residual > tolerances::ALGEBRAIC_LOOSE {
        return Err(Error::NotReflection { residual });
    }
    Ok(GbProjection { t: Box::new(t), lambda: Complex64::new(-1.0, 0.0) })
}

/// `max ||T^2 f - (λ + 1) T f + λ f||` over the test functions and nodes.
pub fn gbp_quadratic_residual(
    space: &RangeSpace,
    t: &BlochOperator,
    lambda: Complex64,
    test_fns: &[AnalyticFunction],
    nodes: &[Complex64],
) -> Result<f64> {
    if (lambda.norm() - 1.0).abs() > tolerances::ALGEBRAIC_LOOSE {
        return Err(Error::NotUnimodular(lambda.norm()));
    }
    if (lambda - 1.0).norm() <= tolerances::ALGEBRAIC_LOOSE {
        return Err(Error::Config("λ = 1 gives no projection".into()));
    }
    if !t.is_isometry() {
        return Err(Error::Unsupported("quadratic residual needs an isometry operator".into()));
    }
    let mut worst: f64 = 0.0;
    for f in test_fns {
        let tf = t.apply(f)?;
        let ttf = t.apply(&tf)?;
        let r = sup_on(space, nodes, |z| ttf.eval_raw(z) - tf.eval_raw(z) * (lambda + 1.0) + f.eval_raw(z) * lambda);
        worst = worst.max(r);
    }
    Ok(worst)
}

/// `max_f ||P^2 f - P f||` in the sampled Bloch norm.
pub fn idempotence_residual(space: &RangeSpace, p: &GbProjection, test_fns: &[AnalyticFunction], nodes: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for f in test_fns {
        let pf = p.apply(f)?;
        let ppf = p.apply(&pf)?;
        worst = worst.max(sampled_distance(space, &ppf, &pf, nodes));
    }
    Ok(worst)
}

/// `max_f ||T^2 f - f||` in the sampled Bloch norm.
pub fn involution_residual(space: &RangeSpace, t: &BlochOperator, test_fns: &[AnalyticFunction], nodes: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for f in test_fns {
        let ttf = t.apply(&t.apply(f)?)?;
        worst = worst.max(sampled_distance(space, &ttf, f, nodes));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::sampling::default_nodes;
    use crate::operators::CompositionIsometry;
    use crate::range_space::VectorValue;

    fn v() -> VectorValue {
        VectorValue::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)])
    }

    fn odd_part_projection() -> GbProjection {
        let s = RangeSpace::euclidean(2);
        let minus = Complex64::new(-1.0, 0.0);
        let t = CompositionIsometry::new(&s, ELinearMap::scalar(2, minus), MobiusAutomorphism::rotation(minus).unwrap()).unwrap();
        gbp_from_reflection(BlochOperator::CompositionIsometryB0(t)).unwrap()
    }

    #[test]
    fn odd_part() {
        let s = RangeSpace::euclidean(2);
        let p = odd_part_projection();
        let nodes = default_nodes();
        let z1 = AnalyticFunction::monomial(1, v());
        let z2 = AnalyticFunction::monomial(2, v());
        assert!(sampled_distance(&s, &p.apply(&z1).unwrap(), &z1, &nodes) < 1e-15);
        assert!(super::super::sampling::sampled_norm(&s, &p.apply(&z2).unwrap(), &nodes) < 1e-15);
    }

    #[test]
    fn identity_is_its_own_projection() {
        let s = RangeSpace::euclidean(2);
        let p = gbp_from_reflection(BlochOperator::CompositionIsometryB0(CompositionIsometry::identity(2))).unwrap();
        let f = AnalyticFunction::monomial(3, v());
        assert!(sampled_distance(&s, &p.apply(&f).unwrap(), &f, &default_nodes()) < 1e-15);
    }

    #[test]
    fn rejects_non_reflections() {
        let s = RangeSpace::euclidean(2);
        let t = CompositionIsometry::new(&s, ELinearMap::identity(2), MobiusAutomorphism::rotation(Complex64::new(0.0, 1.0)).unwrap()).unwrap();
        assert!(matches!(gbp_from_reflection(BlochOperator::CompositionIsometryB0(t)), Err(Error::NotReflection { .. })));
    }

    #[test]
    fn quarter_turn_fails_the_quadratic_for_lambda_i() {
        let s = RangeSpace::euclidean(2);
        let i = Complex64::new(0.0, 1.0);
        let t = BlochOperator::CompositionIsometryB0(
            CompositionIsometry::new(&s, ELinearMap::identity(2), MobiusAutomorphism::rotation(i).unwrap()).unwrap(),
        );
        let nodes = default_nodes();
        let z1 = [AnalyticFunction::monomial(1, v())];
        assert!(gbp_quadratic_residual(&s, &t, i, &z1, &nodes).unwrap() < 1e-15);
        // (i^2)^2 - (1 + i) i^2 + i = 2 + 2i on z^2 v
        let z2 = [AnalyticFunction::monomial(2, v())];
        let r = gbp_quadratic_residual(&s, &t, i, &z2, &nodes).unwrap();
        let rmax = nodes.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
        let want = 8f64.sqrt() * rmax * s.norm(&v()).unwrap();
        assert!((r - want).abs() < 1e-12, "{r} {want}");
    }
}
