use num_complex::Complex64;
use serde::Serialize;

use crate::bloch::{AnalyticFunction, Scale};
use crate::disc::{DiscPoint, MobiusAutomorphism};
use crate::error::{Error, Result};
use crate::range_space::{pairing, ELinearMap, RangeSpace, VectorValue};
use crate::tolerances;

/// Samples used when certifying that a matrix is an isometry of `E`.
pub const CERTIFY_SAMPLES: usize = 1000;

pub(crate) fn certify_isometry(space: &RangeSpace, m: &ELinearMap) -> Result<()> {
    let r = space.is_isometry(m, CERTIFY_SAMPLES, 0)?;
    if r.max_distortion > tolerances::ALGEBRAIC_LOOSE {
        return Err(Error::NotIsometry { distortion: r.max_distortion });
    }
    Ok(())
}

/// `Tf = S[f∘σ - f(σ(0))]` on `B0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionIsometry {
    pub(crate) s: ELinearMap,
    pub(crate) sigma: MobiusAutomorphism,
}

impl CompositionIsometry {
    pub fn new(space: &RangeSpace, s: ELinearMap, sigma: MobiusAutomorphism) -> Result<Self> {
        certify_isometry(space, &s)?;
        Ok(Self { s, sigma })
    }

    pub(crate) fn new_unchecked(s: ELinearMap, sigma: MobiusAutomorphism) -> Self {
        Self { s, sigma }
    }

    pub fn identity(d: usize) -> Self {
        Self::new_unchecked(ELinearMap::identity(d), MobiusAutomorphism::identity())
    }

    pub fn s(&self) -> &ELinearMap {
        &self.s
    }

    pub fn sigma(&self) -> &MobiusAutomorphism {
        &self.sigma
    }

    /// `(S^{-1}, σ^{-1})`.
    pub fn inverse(&self) -> Result<Self> {
        let s = self.s.inverse().ok_or(Error::NotIsometry { distortion: f64::INFINITY })?;
        Ok(Self::new_unchecked(s, self.sigma.inverse()))
    }

    pub fn apply(&self, f: &AnalyticFunction) -> Result<AnalyticFunction> {
        apply_isometry_b0(self, f)
    }
}

/// `Tf = U f(0) + V[f∘σ - f(σ(0))]` on `B*`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarIsometry {
    pub(crate) u: ELinearMap,
    pub(crate) v: ELinearMap,
    pub(crate) sigma: MobiusAutomorphism,
}

impl StarIsometry {
    pub fn new(space: &RangeSpace, u: ELinearMap, v: ELinearMap, sigma: MobiusAutomorphism) -> Result<Self> {
        certify_isometry(space, &u)?;
        certify_isometry(space, &v)?;
        Ok(Self { u, v, sigma })
    }

    pub(crate) fn new_unchecked(u: ELinearMap, v: ELinearMap, sigma: MobiusAutomorphism) -> Self {
        Self { u, v, sigma }
    }

    pub fn u(&self) -> &ELinearMap {
        &self.u
    }

    pub fn v(&self) -> &ELinearMap {
        &self.v
    }

    pub fn sigma(&self) -> &MobiusAutomorphism {
        &self.sigma
    }

    /// `g -> U^{-1} g(0) + V^{-1}[g∘σ^{-1} - g(σ^{-1}(0))]`.
    pub fn inverse(&self) -> Result<Self> {
        let bad = || Error::NotIsometry { distortion: f64::INFINITY };
        Ok(Self::new_unchecked(
            self.u.inverse().ok_or_else(bad)?,
            self.v.inverse().ok_or_else(bad)?,
            self.sigma.inverse(),
        ))
    }

    pub fn apply(&self, f: &AnalyticFunction) -> Result<AnalyticFunction> {
        apply_isometry_star(self, f)
    }
}

/// `z -> S[f(σ(z)) - f(σ(0))]`; `f` must vanish at the origin.
pub fn apply_isometry_b0(op: &CompositionIsometry, f: &AnalyticFunction) -> Result<AnalyticFunction> {
    let at0 = f.value_at_zero_size();
    if at0 > tolerances::VANISHING {
        return Err(Error::NotInB0(at0));
    }
    check_dim(op.s.dim(), f)?;
    let shifted = AnalyticFunction::minus_value_at_zero(AnalyticFunction::composed(f.clone(), op.sigma));
    AnalyticFunction::mapped(op.s.clone(), shifted)
}

/// `z -> U f(0) + V[f(σ(z)) - f(σ(0))]`.
pub fn apply_isometry_star(op: &StarIsometry, f: &AnalyticFunction) -> Result<AnalyticFunction> {
    check_dim(op.v.dim(), f)?;
    let f0 = AnalyticFunction::constant(f.eval_raw(Complex64::new(0.0, 0.0)));
    let shifted = AnalyticFunction::minus_value_at_zero(AnalyticFunction::composed(f.clone(), op.sigma));
    AnalyticFunction::linear_combination(vec![
        AnalyticFunction::term(Scale::Linear(op.u.clone()), f0),
        AnalyticFunction::term(Scale::Linear(op.v.clone()), shifted),
    ])
}

fn check_dim(d: usize, f: &AnalyticFunction) -> Result<()> {
    if f.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: f.dim() });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdjointActionReport {
    /// `|LHS - RHS|` of `(1-|z|^2) u*((Tf)'(z)) = (1-|w|^2) v*(f'(w))`.
    pub residual: f64,
    #[serde(with = "crate::json::complex_pair")]
    pub kappa: Complex64,
    /// `||κ| - 1|`.
    pub kappa_defect: f64,
}

/// Checks how a unit functional at `z` pulls back through `T` to `w = σ(z)`:
/// `v* = κ (u* ∘ S)` with `κ = (1 - |z|^2) σ'(z) / (1 - |σ(z)|^2)`.
pub fn adjoint_action_check(
    space: &RangeSpace,
    op: &CompositionIsometry,
    u_star: &VectorValue,
    z: DiscPoint,
    f: &AnalyticFunction,
) -> Result<AdjointActionReport> {
    let n = space.dual_norm(u_star)?;
    if (n - 1.0).abs() > tolerances::ALGEBRAIC_LOOSE {
        return Err(Error::NotNormalized(n));
    }
    let tf = apply_isometry_b0(op, f)?;
    let w = op.sigma.apply(z)?;
    let dsigma = op.sigma.derivative(z)?;
    let kappa = z.weight() * dsigma / w.weight();
    let v_star = op.s.pull_back(u_star) * kappa;

    let lhs = pairing(u_star, &tf.deriv(z)) * z.weight();
    let rhs = pairing(&v_star, &f.deriv(w)) * w.weight();
    Ok(AdjointActionReport { residual: (lhs - rhs).norm(), kappa, kappa_defect: (kappa.norm() - 1.0).abs() })
}
