//! Seeded test functions: the monomial basis, Möbius witnesses and random
//! polynomials with geometrically decaying coefficients.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SuiteConfig;
use crate::bloch::AnalyticFunction;
use crate::disc::DiscPoint;
use crate::error::Result;
use crate::range_space::{random_vector, RangeSpace, VectorValue};

/// Centers of the witness functions.
pub const WITNESS_CENTERS: [(f64, f64); 4] = [(0.0, 0.0), (0.3, 0.0), (0.5, 0.2), (0.0, 0.8)];

pub fn unit_vector(d: usize, j: usize) -> VectorValue {
    VectorValue::from_fn(d, |i, _| Complex64::from(if i == j { 1.0 } else { 0.0 }))
}

/// `z^k e_j` for `1 <= k <= degree`, `0 <= j < d`.
pub fn basis_functions(d: usize, degree: usize) -> Vec<AnalyticFunction> {
    (1..=degree)
        .flat_map(|k| (0..d).map(move |j| AnalyticFunction::monomial(k, unit_vector(d, j))))
        .collect()
}

/// Witnesses centered on [`WITNESS_CENTERS`], each with a unit vector `e`.
pub fn witness_functions(space: &RangeSpace) -> Vec<AnalyticFunction> {
    let d = space.dim();
    let raw = VectorValue::from_fn(d, |i, _| Complex64::new(1.0, 0.5 * i as f64));
    let e = &raw * Complex64::from(1.0 / space.norm_unchecked(&raw));
    WITNESS_CENTERS
        .iter()
        .map(|&(re, im)| AnalyticFunction::witness(DiscPoint::from_parts(re, im).expect("fixed interior centers"), e.clone()))
        .collect()
}

/// `Σ_{k=1}^{degree} c_k z^k` with `||c_k|| <= 2^{-k}` and `c_0 = 0`.
pub fn random_polynomial<R: Rng>(space: &RangeSpace, degree: usize, rng: &mut R) -> AnalyticFunction {
    let d = space.dim();
    let mut coeffs = vec![VectorValue::zeros(d)];
    for k in 1..=degree {
        let g = random_vector(d, rng);
        let size = rng.random_range(0.1..1.0) * 0.5f64.powi(k as i32);
        coeffs.push(&g * Complex64::from(size / space.norm_unchecked(&g)));
    }
    AnalyticFunction::Polynomial { coeffs }
}

/// The `B0` corpus: basis, witnesses, then random polynomials.
pub fn generate_test_functions(config: &SuiteConfig) -> Result<Vec<AnalyticFunction>> {
    let space = config.range_space()?;
    let mut out = basis_functions(space.dim(), config.basis_degree);
    out.extend(witness_functions(&space));
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    out.extend((0..config.random_polynomials).map(|_| random_polynomial(&space, config.basis_degree, &mut rng)));
    Ok(out)
}

/// `f + c` with a seeded random constant, for checks on the star space.
pub fn with_random_constant<R: Rng>(space: &RangeSpace, f: &AnalyticFunction, rng: &mut R) -> Result<AnalyticFunction> {
    let c = random_vector(space.dim(), rng);
    AnalyticFunction::combine(Complex64::from(1.0), f.clone(), Complex64::from(1.0), AnalyticFunction::constant(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_count() {
        assert_eq!(basis_functions(2, 3).len(), 6);
    }

    #[test]
    fn corpus_lies_in_b0_and_is_reproducible() {
        let cfg = SuiteConfig::default();
        let a = generate_test_functions(&cfg).unwrap();
        let b = generate_test_functions(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|f| f.vanishes_at_zero(0.0)));
        let space = cfg.range_space().unwrap();
        for f in a.iter().skip(cfg.basis_degree * cfg.space.d + WITNESS_CENTERS.len()) {
            let cs = f.to_polynomial().unwrap();
            for (k, c) in cs.iter().enumerate().skip(1) {
                assert!(space.norm(c).unwrap() <= 0.5f64.powi(k as i32));
            }
        }
    }
}
