//! One-parameter isometry groups and their hermitian generators.
//!
//! Convention: `T_t = exp(-itA)` and `S_t = exp(-itV)`. Differentiating
//! `T_t f = S_t[f∘σ_t - f(σ_t(0))]` at `t = 0` gives
//! `A f = V f + i[P f' - P(0) f'(0)]`, where `P` is the invariant polynomial.
//! The constant `P(0) f'(0)` keeps `A f` in `B0`; it vanishes for flows
//! fixing the origin.

use num_complex::Complex64;

use super::isometry::{CompositionIsometry, StarIsometry};
use crate::bloch::{bloch_seminorm, AnalyticFunction, GridParams};
use crate::disc::{AutomorphismFlow, DiscPoint};
use crate::error::{Error, Result};
use crate::range_space::{exp_itv, ELinearMap, RangeSpace, VectorValue};
use crate::tolerances;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Times at which `exp(itV)` is tested when certifying a hermitian.
pub const HERMITIAN_TIMES: [f64; 6] = [-2.0, -0.7, -0.1, 0.1, 0.7, 2.0];

pub(crate) fn certify_hermitian(space: &RangeSpace, v: &ELinearMap) -> Result<()> {
    let r = space.is_hermitian(v, &HERMITIAN_TIMES, 200, 0)?;
    if r.max_distortion > tolerances::ALGEBRAIC_LOOSE {
        return Err(Error::NotHermitian { distortion: r.max_distortion });
    }
    Ok(())
}

/// `A f = V f + i[P f' - P(0) f'(0)]` on `B0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianGenerator {
    pub(crate) v: ELinearMap,
    pub(crate) flow: AutomorphismFlow,
}

impl HermitianGenerator {
    pub fn new(space: &RangeSpace, v: ELinearMap, flow: AutomorphismFlow) -> Result<Self> {
        certify_hermitian(space, &v)?;
        Ok(Self { v, flow })
    }

    pub fn v(&self) -> &ELinearMap {
        &self.v
    }

    pub fn flow(&self) -> &AutomorphismFlow {
        &self.flow
    }

    /// `A f` as a function; exact for polynomial `f`.
    pub fn apply(&self, f: &AnalyticFunction) -> Result<AnalyticFunction> {
        generator_polynomial(None, &self.v, &self.flow, f)
    }
}

/// Pointwise `(A f)(z)`; works for every function variant.
pub fn hermitian_generator_apply(gen: &HermitianGenerator, f: &AnalyticFunction, z: DiscPoint) -> VectorValue {
    generator_at(None, &gen.v, &gen.flow, f, z.value())
}

/// `A f = U f(0) + V[f - f(0)] + i[P f' - P(0) f'(0)]` on `B*`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarGenerator {
    pub(crate) u: ELinearMap,
    pub(crate) v: ELinearMap,
    pub(crate) flow: AutomorphismFlow,
}

impl StarGenerator {
    pub fn new(space: &RangeSpace, u: ELinearMap, v: ELinearMap, flow: AutomorphismFlow) -> Result<Self> {
        certify_hermitian(space, &u)?;
        certify_hermitian(space, &v)?;
        Ok(Self { u, v, flow })
    }

    pub fn apply(&self, f: &AnalyticFunction) -> Result<AnalyticFunction> {
        generator_polynomial(Some(&self.u), &self.v, &self.flow, f)
    }
}

pub fn star_generator_apply(gen: &StarGenerator, f: &AnalyticFunction, z: DiscPoint) -> VectorValue {
    generator_at(Some(&gen.u), &gen.v, &gen.flow, f, z.value())
}

fn generator_at(u: Option<&ELinearMap>, v: &ELinearMap, flow: &AutomorphismFlow, f: &AnalyticFunction, z: Complex64) -> VectorValue {
    let p = flow.invariant_polynomial();
    let transport = f.deriv_raw(z) * p.eval(z) - f.deriv_raw(ZERO) * p.eval(ZERO);
    let linear = match u {
        None => v.apply(&f.eval_raw(z)),
        Some(u) => {
            let f0 = f.eval_raw(ZERO);
            u.apply(&f0) + v.apply(&(f.eval_raw(z) - f0))
        }
    };
    linear + transport * I
}

fn generator_polynomial(
    u: Option<&ELinearMap>,
    v: &ELinearMap,
    flow: &AutomorphismFlow,
    f: &AnalyticFunction,
) -> Result<AnalyticFunction> {
    let c = f
        .to_polynomial()
        .ok_or_else(|| Error::Unsupported("generator functions are built for polynomials only".into()))?;
    if c[0].len() != v.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), found: c[0].len() });
    }
    let p = flow.invariant_polynomial();
    let q = [p.q0, p.q1, p.q2];
    let n = c.len();
    let d = v.dim();
    // (P f')_m = Σ_j q_j (m - j + 1) c_{m-j+1}
    let mut out: Vec<VectorValue> = (0..=n).map(|_| VectorValue::zeros(d)).collect();
    for (m, o) in out.iter_mut().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            let k = m + 1;
            if k < j || k - j >= n || k - j == 0 {
                continue;
            }
            let idx = k - j;
            *o += &c[idx] * (qj * I * idx as f64);
        }
        if m < n {
            *o += v.apply(&c[m]);
        }
    }
    // Remove i P(0) f'(0) from the constant term.
    if n > 1 {
        out[0] -= &c[1] * (q[0] * I);
    }
    if let Some(u) = u {
        out[0] += u.apply(&c[0]) - v.apply(&c[0]);
    }
    AnalyticFunction::polynomial(out)
}

/// `T_t f = exp(-itV)[f∘σ_t - f(σ_t(0))]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryGroup {
    pub(crate) v: ELinearMap,
    pub(crate) flow: AutomorphismFlow,
}

impl IsometryGroup {
    pub fn new(space: &RangeSpace, v: ELinearMap, flow: AutomorphismFlow) -> Result<Self> {
        certify_hermitian(space, &v)?;
        Ok(Self { v, flow })
    }

    pub fn v(&self) -> &ELinearMap {
        &self.v
    }

    pub fn flow(&self) -> &AutomorphismFlow {
        &self.flow
    }

    pub fn at(&self, t: f64) -> CompositionIsometry {
        group_at(self, t)
    }

    pub fn generator(&self) -> HermitianGenerator {
        HermitianGenerator { v: self.v.clone(), flow: self.flow }
    }
}

pub fn group_at(g: &IsometryGroup, t: f64) -> CompositionIsometry {
    CompositionIsometry::new_unchecked(exp_itv(&g.v, t), g.flow.at(t))
}

/// `T_t f = exp(-itU) f(0) + exp(-itV)[f∘σ_t - f(σ_t(0))]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarGroup {
    pub(crate) u: ELinearMap,
    pub(crate) v: ELinearMap,
    pub(crate) flow: AutomorphismFlow,
}

impl StarGroup {
    pub fn new(space: &RangeSpace, u: ELinearMap, v: ELinearMap, flow: AutomorphismFlow) -> Result<Self> {
        certify_hermitian(space, &u)?;
        certify_hermitian(space, &v)?;
        Ok(Self { u, v, flow })
    }

    pub fn at(&self, t: f64) -> StarIsometry {
        star_group_at(&self.v, &self.u, &self.flow, t)
    }

    pub fn generator(&self) -> StarGenerator {
        StarGenerator { u: self.u.clone(), v: self.v.clone(), flow: self.flow }
    }
}

pub fn star_group_at(v: &ELinearMap, u: &ELinearMap, flow: &AutomorphismFlow, t: f64) -> StarIsometry {
    StarIsometry::new_unchecked(exp_itv(u, t), exp_itv(v, t), flow.at(t))
}

/// `max_z ||(T_t f)(z) - f(z) + it (A f)(z)|| / |t|` over the nodes.
pub fn generator_consistency(space: &RangeSpace, g: &IsometryGroup, f: &AnalyticFunction, t: f64, nodes: &[Complex64]) -> Result<f64> {
    let tf = group_at(g, t).apply(f)?;
    Ok(first_order_residual(space, &tf, f, t, nodes, |z| generator_at(None, &g.v, &g.flow, f, z)))
}

pub fn star_generator_consistency(space: &RangeSpace, g: &StarGroup, f: &AnalyticFunction, t: f64, nodes: &[Complex64]) -> Result<f64> {
    let tf = g.at(t).apply(f)?;
    Ok(first_order_residual(space, &tf, f, t, nodes, |z| generator_at(Some(&g.u), &g.v, &g.flow, f, z)))
}

fn first_order_residual<A>(space: &RangeSpace, tf: &AnalyticFunction, f: &AnalyticFunction, t: f64, nodes: &[Complex64], af: A) -> f64
where
    A: Fn(Complex64) -> VectorValue,
{
    let it = Complex64::new(0.0, t);
    super::sampling::sup_on(space, nodes, |z| tf.eval_raw(z) - f.eval_raw(z) + af(z) * it) / t.abs()
}

/// `||A(z^n v)||_{B0}` for `n = 1..=n_max`.
pub fn unboundedness_probe(
    space: &RangeSpace,
    gen: &HermitianGenerator,
    v: &VectorValue,
    n_max: usize,
    grid: &GridParams,
) -> Result<Vec<f64>> {
    (1..=n_max)
        .map(|n| {
            let af = gen.apply(&AnalyticFunction::monomial(n, v.clone()))?;
            Ok(bloch_seminorm(space, &af, grid).value)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::sampling::{default_nodes, sampled_distance};

    fn e0(d: usize) -> VectorValue {
        VectorValue::from_fn(d, |i, _| Complex64::from(if i == 0 { 1.0 } else { 0.0 }))
    }

    fn diag(d: usize) -> ELinearMap {
        let xs: Vec<Complex64> = (1..=d).map(|k| Complex64::from(k as f64)).collect();
        ELinearMap::diagonal(&xs)
    }

    #[test]
    fn identity_flow_generator_is_v() {
        let s = RangeSpace::euclidean(3);
        let gen = HermitianGenerator::new(&s, diag(3), AutomorphismFlow::identity()).unwrap();
        let v = VectorValue::from_vec(vec![Complex64::from(1.0), Complex64::new(0.0, 1.0), Complex64::from(-2.0)]);
        let f = AnalyticFunction::polynomial(vec![VectorValue::zeros(3), v.clone(), v.clone()]).unwrap();
        let z = DiscPoint::from_parts(0.3, -0.2).unwrap();
        let got = hermitian_generator_apply(&gen, &f, z);
        let fz = f.eval(z);
        // (f1, 2 f2, 3 f3)
        let want = VectorValue::from_fn(3, |i, _| fz[i] * (i + 1) as f64);
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn rotation_generator_on_monomials() {
        let s = RangeSpace::euclidean(2);
        let c = 1.5;
        let gen = HermitianGenerator::new(&s, ELinearMap::zeros(2), AutomorphismFlow::elliptic(c, ZERO).unwrap()).unwrap();
        for n in 1..5 {
            let f = AnalyticFunction::monomial(n, e0(2));
            let af = gen.apply(&f).unwrap();
            let want = AnalyticFunction::monomial(n, e0(2) * Complex64::from(-c * n as f64));
            assert!(sampled_distance(&s, &af, &want, &default_nodes()) < 1e-13);
        }
    }

    #[test]
    fn polynomial_and_pointwise_generators_agree() {
        let s = RangeSpace::euclidean(2);
        let m = ELinearMap::new(nalgebra::DMatrix::from_row_slice(2, 2, &[
            Complex64::from(0.5), Complex64::new(0.2, 0.3),
            Complex64::new(0.2, -0.3), Complex64::from(-1.0),
        ])).unwrap();
        let alpha = Complex64::from_polar(1.0, 0.4);
        let flows = [
            AutomorphismFlow::elliptic(0.8, Complex64::new(0.2, -0.3)).unwrap(),
            AutomorphismFlow::hyperbolic(1.1, alpha, Complex64::from_polar(1.0, 2.5)).unwrap(),
            AutomorphismFlow::parabolic(-0.6, alpha).unwrap(),
        ];
        let v = VectorValue::from_vec(vec![Complex64::new(0.3, 0.1), Complex64::from(0.7)]);
        let f = AnalyticFunction::polynomial(vec![VectorValue::zeros(2), v.clone(), v.clone() * I, v]).unwrap();
        for flow in flows {
            let gen = HermitianGenerator::new(&s, m.clone(), flow).unwrap();
            let af = gen.apply(&f).unwrap();
            assert!(af.vanishes_at_zero(1e-15));
            for &z in &default_nodes() {
                let p = hermitian_generator_apply(&gen, &f, DiscPoint::new(z).unwrap());
                assert!((af.eval_raw(z) - p).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn star_generator_sends_constants_through_u() {
        let s = RangeSpace::euclidean(2);
        let u = diag(2);
        let gen = StarGenerator::new(&s, u.clone(), ELinearMap::zeros(2), AutomorphismFlow::parabolic(1.0, Complex64::from(1.0)).unwrap()).unwrap();
        let c = VectorValue::from_vec(vec![Complex64::new(1.0, 1.0), Complex64::from(2.0)]);
        let af = gen.apply(&AnalyticFunction::constant(c.clone())).unwrap();
        let want = AnalyticFunction::constant(u.apply(&c));
        assert!(sampled_distance(&s, &af, &want, &default_nodes()) < 1e-15);
    }

    #[test]
    fn group_starts_at_the_identity() {
        let s = RangeSpace::euclidean(2);
        let g = IsometryGroup::new(&s, diag(2), AutomorphismFlow::elliptic(1.0, Complex64::new(0.1, 0.1)).unwrap()).unwrap();
        let f = AnalyticFunction::monomial(2, e0(2));
        assert!(sampled_distance(&s, &g.at(0.0).apply(&f).unwrap(), &f, &default_nodes()) < 1e-15);
    }

    #[test]
    fn first_order_residual_halves_with_t() {
        let s = RangeSpace::euclidean(1);
        let g = IsometryGroup::new(&s, ELinearMap::zeros(1), AutomorphismFlow::elliptic(1.0, ZERO).unwrap()).unwrap();
        let f = AnalyticFunction::monomial(1, e0(1));
        let nodes = default_nodes();
        let r1 = generator_consistency(&s, &g, &f, 1e-2, &nodes).unwrap();
        let r2 = generator_consistency(&s, &g, &f, 5e-3, &nodes).unwrap();
        assert!((r1 / r2 - 2.0).abs() < 0.05, "{r1} {r2}");
    }

    #[test]
    fn rejects_non_hermitian_v() {
        let s = RangeSpace::euclidean(2);
        let m = ELinearMap::new(nalgebra::DMatrix::from_row_slice(2, 2, &[ZERO, Complex64::from(1.0), ZERO, ZERO])).unwrap();
        assert!(IsometryGroup::new(&s, m, AutomorphismFlow::identity()).is_err());
    }
}
