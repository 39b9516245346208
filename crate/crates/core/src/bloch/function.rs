use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc::{DiscPoint, MobiusAutomorphism};
use crate::error::{Error, Result};
use crate::json::{complex_pair, from_pair, to_pair, vector_from_pairs, vector_to_pairs, Pair};
use crate::range_space::{ELinearMap, VectorValue};

/// Coefficient attached to a term of a linear combination.
#[derive(Debug, Clone, PartialEq)]
pub enum Scale {
    Scalar(Complex64),
    Linear(ELinearMap),
}

impl Scale {
    fn apply(&self, v: VectorValue) -> VectorValue {
        match self {
            Scale::Scalar(s) => v * *s,
            Scale::Linear(m) => m.apply(&v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub scale: Scale,
    pub function: Arc<AnalyticFunction>,
}

/// An analytic map from the disc into `C^d` with an exact derivative.
///
/// The variants are closed under everything the operators need: composition
/// with automorphisms, linear maps on values and finite sums.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFunction {
    /// `f(z) = Σ c_k z^k`.
    Polynomial { coeffs: Vec<VectorValue> },
    /// `f(z) = (1 - |z0|^2) z / (1 - conj(z0) z) · e`.
    Witness { z0: DiscPoint, e: VectorValue },
    /// `f = g ∘ σ`.
    Composed { inner: Arc<AnalyticFunction>, sigma: MobiusAutomorphism },
    /// `f = Σ scale_k · g_k`.
    LinearCombination { terms: Vec<Term> },
}

impl AnalyticFunction {
    pub fn polynomial(coeffs: Vec<VectorValue>) -> Result<Self> {
        let d = coeffs
            .first()
            .map(|c| c.len())
            .ok_or_else(|| Error::Descriptor("polynomial needs at least one coefficient".into()))?;
        if let Some(bad) = coeffs.iter().find(|c| c.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: bad.len() });
        }
        if d == 0 {
            return Err(Error::Descriptor("zero-dimensional coefficients".into()));
        }
        Ok(Self::Polynomial { coeffs })
    }

    pub fn constant(c: VectorValue) -> Self {
        Self::Polynomial { coeffs: vec![c] }
    }

    /// `z^k v`.
    pub fn monomial(k: usize, v: VectorValue) -> Self {
        let zero = VectorValue::zeros(v.len());
        let mut coeffs = vec![zero; k];
        coeffs.push(v);
        Self::Polynomial { coeffs }
    }

    pub fn witness(z0: DiscPoint, e: VectorValue) -> Self {
        Self::Witness { z0, e }
    }

    pub fn composed(inner: impl Into<Arc<AnalyticFunction>>, sigma: MobiusAutomorphism) -> Self {
        Self::Composed { inner: inner.into(), sigma }
    }

    pub fn linear_combination(terms: Vec<Term>) -> Result<Self> {
        let d = terms
            .first()
            .map(|t| t.function.dim())
            .ok_or_else(|| Error::Descriptor("empty linear combination".into()))?;
        for t in &terms {
            if t.function.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: t.function.dim() });
            }
            if let Scale::Linear(m) = &t.scale {
                if m.dim() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: m.dim() });
                }
            }
        }
        Ok(Self::LinearCombination { terms })
    }

    pub fn term(scale: Scale, f: impl Into<Arc<AnalyticFunction>>) -> Term {
        Term { scale, function: f.into() }
    }

    /// `S ∘ f` for a linear map `S` on values.
    pub fn mapped(m: ELinearMap, f: impl Into<Arc<AnalyticFunction>>) -> Result<Self> {
        Self::linear_combination(vec![Self::term(Scale::Linear(m), f)])
    }

    /// `f - f(0)`, kept as a combination with an explicit constant term.
    pub fn minus_value_at_zero(f: impl Into<Arc<AnalyticFunction>>) -> Self {
        let f: Arc<AnalyticFunction> = f.into();
        let at0 = f.eval_raw(Complex64::new(0.0, 0.0));
        Self::LinearCombination {
            terms: vec![
                Self::term(Scale::Scalar(Complex64::new(1.0, 0.0)), f),
                Self::term(Scale::Scalar(Complex64::new(-1.0, 0.0)), Self::constant(at0)),
            ],
        }
    }

    /// `a f + b g`.
    pub fn combine(a: Complex64, f: impl Into<Arc<AnalyticFunction>>, b: Complex64, g: impl Into<Arc<AnalyticFunction>>) -> Result<Self> {
        Self::linear_combination(vec![Self::term(Scale::Scalar(a), f), Self::term(Scale::Scalar(b), g)])
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polynomial { coeffs } => coeffs[0].len(),
            Self::Witness { e, .. } => e.len(),
            Self::Composed { inner, .. } => inner.dim(),
            Self::LinearCombination { terms } => terms[0].function.dim(),
        }
    }

    pub fn eval(&self, z: DiscPoint) -> VectorValue {
        self.eval_raw(z.value())
    }

    pub fn deriv(&self, z: DiscPoint) -> VectorValue {
        self.deriv_raw(z.value())
    }

    /// Evaluation at an arbitrary complex point. Polynomials are entire; the
    /// other variants are only meaningful inside the disc.
    pub fn eval_raw(&self, z: Complex64) -> VectorValue {
        match self {
            Self::Polynomial { coeffs } => horner(coeffs.iter().rev(), z, coeffs[0].len()),
            Self::Witness { z0, e } => {
                let z0 = z0.value();
                e * ((1.0 - z0.norm_sqr()) * z / (1.0 - z0.conj() * z))
            }
            Self::Composed { inner, sigma } => inner.eval_raw(sigma.map(z)),
            Self::LinearCombination { terms } => sum_terms(terms, |f| f.eval_raw(z)),
        }
    }

    pub fn deriv_raw(&self, z: Complex64) -> VectorValue {
        match self {
            Self::Polynomial { coeffs } => {
                let d = coeffs[0].len();
                if coeffs.len() == 1 {
                    return VectorValue::zeros(d);
                }
                // Σ k c_k z^{k-1}
                let scaled: Vec<VectorValue> =
                    coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Complex64::from(k as f64)).collect();
                horner(scaled.iter().rev(), z, d)
            }
            Self::Witness { z0, e } => {
                let z0 = z0.value();
                let den = 1.0 - z0.conj() * z;
                e * ((1.0 - z0.norm_sqr()) / (den * den))
            }
            Self::Composed { inner, sigma } => inner.deriv_raw(sigma.map(z)) * sigma.derivative_at(z),
            Self::LinearCombination { terms } => sum_terms(terms, |f| f.deriv_raw(z)),
        }
    }

    /// Whether `f(0) = 0` to within `tol` (sup norm of components).
    pub fn vanishes_at_zero(&self, tol: f64) -> bool {
        self.value_at_zero_size() <= tol
    }

    /// Coefficients `c_0, c_1, ...` when the function is a polynomial or a
    /// linear combination of polynomials; `None` otherwise.
    pub fn to_polynomial(&self) -> Option<Vec<VectorValue>> {
        match self {
            Self::Polynomial { coeffs } => Some(coeffs.clone()),
            Self::LinearCombination { terms } => {
                let mut acc: Vec<VectorValue> = Vec::new();
                for t in terms {
                    let cs = t.function.to_polynomial()?;
                    if acc.len() < cs.len() {
                        acc.resize(cs.len(), VectorValue::zeros(t.function.dim()));
                    }
                    for (k, c) in cs.into_iter().enumerate() {
                        acc[k] += t.scale.apply(c);
                    }
                }
                Some(acc)
            }
            _ => None,
        }
    }

    pub(crate) fn value_at_zero_size(&self) -> f64 {
        self.eval_raw(Complex64::new(0.0, 0.0)).iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

fn horner<'a>(coeffs: impl Iterator<Item = &'a VectorValue>, z: Complex64, d: usize) -> VectorValue {
    let mut acc = VectorValue::zeros(d);
    for c in coeffs {
        acc *= z;
        acc += c;
    }
    acc
}

fn sum_terms(terms: &[Term], f: impl Fn(&AnalyticFunction) -> VectorValue) -> VectorValue {
    let mut acc = VectorValue::zeros(terms[0].function.dim());
    for t in terms {
        acc += t.scale.apply(f(&t.function));
    }
    acc
}

/// JSON wire form, tagged by `"variant"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum FunctionDescriptor {
    /// `coeffs[k][j]` is component `j` of `c_k`.
    Poly { coeffs: Vec<Vec<Pair>> },
    Witness {
        #[serde(with = "complex_pair")]
        z0: Complex64,
        e: Vec<Pair>,
    },
    Composed { g: Box<FunctionDescriptor>, sigma: MobiusAutomorphism },
    Lincomb { terms: Vec<TermDescriptor> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<ELinearMap>,
    #[serde(rename = "fn")]
    pub function: FunctionDescriptor,
}

impl TryFrom<FunctionDescriptor> for AnalyticFunction {
    type Error = Error;

    fn try_from(d: FunctionDescriptor) -> Result<Self> {
        match d {
            FunctionDescriptor::Poly { coeffs } => {
                AnalyticFunction::polynomial(coeffs.iter().map(|c| vector_from_pairs(c)).collect())
            }
            FunctionDescriptor::Witness { z0, e } => {
                if e.is_empty() {
                    return Err(Error::Descriptor("witness needs a nonempty vector".into()));
                }
                Ok(AnalyticFunction::witness(DiscPoint::new(z0)?, vector_from_pairs(&e)))
            }
            FunctionDescriptor::Composed { g, sigma } => {
                Ok(AnalyticFunction::composed(AnalyticFunction::try_from(*g)?, sigma))
            }
            FunctionDescriptor::Lincomb { terms } => {
                let terms = terms
                    .into_iter()
                    .map(|t| {
                        let scale = match (t.scale, t.matrix) {
                            (Some(s), None) => Scale::Scalar(from_pair(s)),
                            (None, Some(m)) => Scale::Linear(m),
                            (None, None) => Scale::Scalar(Complex64::new(1.0, 0.0)),
                            (Some(_), Some(_)) => {
                                return Err(Error::Descriptor("term has both `scale` and `matrix`".into()))
                            }
                        };
                        Ok(AnalyticFunction::term(scale, AnalyticFunction::try_from(t.function)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                AnalyticFunction::linear_combination(terms)
            }
        }
    }
}

impl From<&AnalyticFunction> for FunctionDescriptor {
    fn from(f: &AnalyticFunction) -> Self {
        match f {
            AnalyticFunction::Polynomial { coeffs } => {
                FunctionDescriptor::Poly { coeffs: coeffs.iter().map(vector_to_pairs).collect() }
            }
            AnalyticFunction::Witness { z0, e } => {
                FunctionDescriptor::Witness { z0: z0.value(), e: vector_to_pairs(e) }
            }
            AnalyticFunction::Composed { inner, sigma } => {
                FunctionDescriptor::Composed { g: Box::new(inner.as_ref().into()), sigma: *sigma }
            }
            AnalyticFunction::LinearCombination { terms } => FunctionDescriptor::Lincomb {
                terms: terms
                    .iter()
                    .map(|t| {
                        let (scale, matrix) = match &t.scale {
                            Scale::Scalar(s) => (Some(to_pair(*s)), None),
                            Scale::Linear(m) => (None, Some(m.clone())),
                        };
                        TermDescriptor { scale, matrix, function: t.function.as_ref().into() }
                    })
                    .collect(),
            },
        }
    }
}

impl Serialize for AnalyticFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionDescriptor::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AnalyticFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = FunctionDescriptor::deserialize(d)?;
        AnalyticFunction::try_from(desc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn v2(a: Complex64, b: Complex64) -> VectorValue {
        VectorValue::from_vec(vec![a, b])
    }

    fn max_diff(a: &VectorValue, b: &VectorValue) -> f64 {
        (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn linear_function_has_constant_derivative() {
        let v = v2(c(1.0, 2.0), c(-0.5, 0.0));
        let f = AnalyticFunction::monomial(1, v.clone());
        for z in [c(0.0, 0.0), c(0.3, -0.6), c(-0.9, 0.1)] {
            assert_eq!(f.deriv_raw(z), v);
        }
    }

    #[test]
    fn witness_at_its_center() {
        let z0 = DiscPoint::from_parts(0.5, 0.2).unwrap();
        let e = v2(c(0.6, 0.0), c(0.0, 0.8));
        let f = AnalyticFunction::witness(z0, e.clone());
        assert!(max_diff(&f.eval(z0), &(&e * z0.value())) < 1e-15);
        assert!(f.vanishes_at_zero(0.0));
    }

    #[test]
    fn composition_with_identity_is_transparent() {
        let f = AnalyticFunction::polynomial(vec![
            v2(c(0.1, 0.0), c(0.0, 0.0)),
            v2(c(0.0, 1.0), c(2.0, 0.0)),
            v2(c(-1.0, 0.5), c(0.3, 0.3)),
        ])
        .unwrap();
        let g = AnalyticFunction::composed(f.clone(), MobiusAutomorphism::identity());
        for z in [c(0.2, 0.2), c(-0.7, 0.0)] {
            assert!(max_diff(&f.eval_raw(z), &g.eval_raw(z)) < 1e-15);
            assert!(max_diff(&f.deriv_raw(z), &g.deriv_raw(z)) < 1e-15);
        }
    }

    #[test]
    fn subtracting_the_value_at_zero() {
        let f = AnalyticFunction::polynomial(vec![v2(c(1.0, 1.0), c(2.0, 0.0)), v2(c(0.0, 1.0), c(1.0, 0.0))]).unwrap();
        assert!(!f.vanishes_at_zero(1e-12));
        let g = AnalyticFunction::minus_value_at_zero(f.clone());
        assert!(g.vanishes_at_zero(0.0));
        let z = c(0.4, 0.1);
        assert!(max_diff(&g.deriv_raw(z), &f.deriv_raw(z)) < 1e-15);
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let a = VectorValue::zeros(2);
        let b = VectorValue::zeros(3);
        assert!(AnalyticFunction::polynomial(vec![a.clone(), b.clone()]).is_err());
        assert!(AnalyticFunction::polynomial(vec![]).is_err());
        let t = vec![
            AnalyticFunction::term(Scale::Scalar(c(1.0, 0.0)), AnalyticFunction::constant(a)),
            AnalyticFunction::term(Scale::Scalar(c(1.0, 0.0)), AnalyticFunction::constant(b)),
        ];
        assert!(AnalyticFunction::linear_combination(t).is_err());
    }

    #[test]
    fn descriptor_schema() {
        let text = r#"{"variant":"poly","coeffs":[[[0,0],[0,0]],[[1,0],[0,1]]]}"#;
        let f: AnalyticFunction = serde_json::from_str(text).unwrap();
        assert_eq!(f, AnalyticFunction::monomial(1, v2(c(1.0, 0.0), c(0.0, 1.0))));

        let text = r#"{"variant":"lincomb","terms":[
            {"scale":[2,0],"fn":{"variant":"witness","z0":[0.5,0],"e":[[1,0]]}},
            {"matrix":[[[0,1]]],"fn":{"variant":"composed","g":{"variant":"poly","coeffs":[[[0,0]],[[1,0]]]},
              "sigma":{"lambda":[1,0],"a":[0.5,0]}}}]}"#;
        let g: AnalyticFunction = serde_json::from_str(text).unwrap();
        let again: AnalyticFunction = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        let z = c(0.1, -0.3);
        assert!(max_diff(&g.eval_raw(z), &again.eval_raw(z)) < 1e-15);
        let sigma = MobiusAutomorphism::from_canonical(c(1.0, 0.0), c(0.5, 0.0)).unwrap();
        let expect = 2.0 * 0.75 * z / (1.0 - 0.5 * z) + c(0.0, 1.0) * sigma.map(z);
        assert!((g.eval_raw(z)[0] - expect).norm() < 1e-15);

        let bad = r#"{"variant":"witness","z0":[1.5,0],"e":[[1,0]]}"#;
        assert!(serde_json::from_str::<AnalyticFunction>(bad).is_err());
    }

    #[test]
    fn polynomial_coefficients_of_sums() {
        let a = v2(c(1.0, 0.0), c(0.0, 2.0));
        let b = v2(c(0.0, 1.0), c(-1.0, 0.0));
        let m = ELinearMap::diagonal(&[c(2.0, 0.0), c(0.0, 1.0)]);
        let f = AnalyticFunction::linear_combination(vec![
            AnalyticFunction::term(Scale::Scalar(c(0.0, 1.0)), AnalyticFunction::monomial(2, a.clone())),
            AnalyticFunction::term(Scale::Linear(m.clone()), AnalyticFunction::constant(b.clone())),
        ])
        .unwrap();
        let cs = f.to_polynomial().unwrap();
        assert_eq!(cs.len(), 3);
        assert!(max_diff(&cs[0], &m.apply(&b)) < 1e-15);
        assert!(cs[1].iter().all(|x| x.norm() == 0.0));
        assert!(max_diff(&cs[2], &(&a * c(0.0, 1.0))) < 1e-15);
        let z = c(0.3, 0.2);
        let direct = &cs[0] + &cs[2] * (z * z);
        assert!(max_diff(&direct, &f.eval_raw(z)) < 1e-15);
        assert!(AnalyticFunction::witness(DiscPoint::origin(), a).to_polynomial().is_none());
    }
}
