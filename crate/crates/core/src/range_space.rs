//! The range space `E = C^d` under an `l_p` norm with `1 < p < ∞`, which is
//! smooth and strictly convex, together with certification of isometries and
//! hermitian matrices on it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{matrix_from_rows, matrix_to_rows, Pair};

pub type VectorValue = DVector<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDescriptor", into = "SpaceDescriptor")]
pub struct RangeSpace {
    dim: usize,
    p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub d: usize,
    #[serde(default = "default_p")]
    pub p: f64,
}

fn default_p() -> f64 {
    2.0
}

impl TryFrom<SpaceDescriptor> for RangeSpace {
    type Error = Error;
    fn try_from(d: SpaceDescriptor) -> Result<Self> {
        RangeSpace::new(d.d, d.p)
    }
}

impl From<RangeSpace> for SpaceDescriptor {
    fn from(s: RangeSpace) -> Self {
        SpaceDescriptor { d: s.dim, p: s.p }
    }
}

impl RangeSpace {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        if dim == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        Ok(Self { dim, p })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self { dim, p: 2.0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent `q = p / (p - 1)`.
    pub fn q(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: n });
        }
        Ok(())
    }

    pub fn norm(&self, v: &VectorValue) -> Result<f64> {
        self.check_dim(v.len())?;
        Ok(self.norm_unchecked(v))
    }

    pub(crate) fn norm_unchecked(&self, v: &VectorValue) -> f64 {
        lp_norm(v.as_slice(), self.p)
    }

    /// Norm of a functional acting by `u(v) = Σ u_k v_k`.
    pub fn dual_norm(&self, u: &VectorValue) -> Result<f64> {
        self.check_dim(u.len())?;
        Ok(lp_norm(u.as_slice(), self.q()))
    }

    /// The unique norm-one functional `u*` with `u*(v) = ||v||`, given as the
    /// coefficient vector of `v -> Σ u*_k v_k`.
    pub fn support_functional(&self, v: &VectorValue) -> Result<VectorValue> {
        self.check_dim(v.len())?;
        let n = self.norm_unchecked(v);
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        let p = self.p;
        Ok(v.map(|x| {
            let m = x.norm();
            if m == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                // conj-phase(x) |x|^{p-1} / ||v||^{p-1}
                x.conj() * ((m / n).powf(p - 1.0) / m)
            }
        }))
    }

    /// Max of `| ||M v|| / ||v|| - 1 |` over seeded random vectors.
    pub fn is_isometry(&self, m: &ELinearMap, n_samples: usize, seed: u64) -> Result<IsometryReport> {
        self.check_square(m)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for k in 0..n_samples {
            let v = if k < self.dim {
                // Always include the basis vectors.
                VectorValue::from_fn(self.dim, |i, _| Complex64::from(if i == k { 1.0 } else { 0.0 }))
            } else {
                random_vector(self.dim, &mut rng)
            };
            let nv = self.norm_unchecked(&v);
            let nm = self.norm_unchecked(&(m.as_matrix() * &v));
            worst = worst.max((nm / nv - 1.0).abs());
        }
        Ok(IsometryReport { max_distortion: worst, samples: n_samples })
    }

    /// Checks that `exp(itM)` is an isometry for every `t` in the grid.
    pub fn is_hermitian(
        &self,
        m: &ELinearMap,
        t_grid: &[f64],
        n_samples: usize,
        seed: u64,
    ) -> Result<HermitianReport> {
        self.check_square(m)?;
        let mut report = HermitianReport { max_distortion: 0.0, worst_t: 0.0, samples: n_samples * t_grid.len() };
        for &t in t_grid {
            // exp(-i(-t)M) = exp(itM)
            let g = exp_itv(m, -t);
            let r = self.is_isometry(&g, n_samples, seed)?;
            if r.max_distortion > report.max_distortion {
                report.max_distortion = r.max_distortion;
                report.worst_t = t;
            }
        }
        Ok(report)
    }

    fn check_square(&self, m: &ELinearMap) -> Result<()> {
        self.check_dim(m.0.nrows())?;
        self.check_dim(m.0.ncols())
    }

    /// A seeded random surjective isometry: a unitary for `p = 2`, otherwise a
    /// permutation with unimodular weights (the only `l_p` isometries).
    pub fn random_isometry<R: Rng>(&self, rng: &mut R) -> ELinearMap {
        if self.p == 2.0 {
            ELinearMap(random_unitary(self.dim, rng))
        } else {
            let mut perm: Vec<usize> = (0..self.dim).collect();
            perm.shuffle(rng);
            let mut m = DMatrix::zeros(self.dim, self.dim);
            for (j, &i) in perm.iter().enumerate() {
                m[(i, j)] = random_phase(rng);
            }
            ELinearMap(m)
        }
    }

    /// A seeded random involutive isometry (`S^2 = I`).
    pub fn random_reflection<R: Rng>(&self, rng: &mut R) -> ELinearMap {
        let d = self.dim;
        if self.p == 2.0 {
            // U diag(±1) U*
            let u = random_unitary(d, rng);
            let signs = DMatrix::from_fn(d, d, |i, j| {
                if i != j {
                    Complex64::new(0.0, 0.0)
                } else if i == 0 || rng.random_bool(0.5) {
                    Complex64::new(-1.0, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            });
            ELinearMap(&u * signs * u.adjoint())
        } else {
            // Disjoint transpositions weighted (w, conj w), fixed points ±1.
            let mut idx: Vec<usize> = (0..d).collect();
            idx.shuffle(rng);
            let mut m = DMatrix::zeros(d, d);
            let mut k = 0;
            while k < d {
                if k + 1 < d && rng.random_bool(0.5) {
                    let (i, j) = (idx[k], idx[k + 1]);
                    let w = random_phase(rng);
                    m[(i, j)] = w;
                    m[(j, i)] = w.conj();
                    k += 2;
                } else {
                    let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    m[(idx[k], idx[k])] = Complex64::from(s);
                    k += 1;
                }
            }
            ELinearMap(m)
        }
    }

    /// A seeded random hermitian: Hermitian matrix for `p = 2`, otherwise a
    /// real diagonal (the hermitians of `l_p`, `p != 2`).
    pub fn random_hermitian<R: Rng>(&self, rng: &mut R) -> ELinearMap {
        let d = self.dim;
        if self.p == 2.0 {
            let g = random_gaussian_matrix(d, rng);
            ELinearMap((&g + g.adjoint()) * Complex64::from(0.5))
        } else {
            ELinearMap(DMatrix::from_fn(d, d, |i, j| {
                if i == j { Complex64::from(rng.random_range(-2.0..2.0)) } else { Complex64::new(0.0, 0.0) }
            }))
        }
    }
}

fn lp_norm(xs: &[Complex64], p: f64) -> f64 {
    let big = xs.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if big == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let s: f64 = xs.iter().map(|x| (x / big).norm_sqr()).sum();
        return big * s.sqrt();
    }
    let s: f64 = xs.iter().map(|x| (x.norm() / big).powf(p)).sum();
    big * s.powf(1.0 / p)
}

/// Standard complex Gaussian vector.
pub fn random_vector<R: Rng>(d: usize, rng: &mut R) -> VectorValue {
    VectorValue::from_fn(d, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

fn random_phase<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

fn random_gaussian_matrix<R: Rng>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let qr = random_gaussian_matrix(d, rng).qr();
    let (q, r) = qr.unpack();
    let phases = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let x = r[(i, i)];
            if x.norm() > 0.0 { x / x.norm() } else { Complex64::new(1.0, 0.0) }
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    q * phases
}

/// `exp(-itV)`, computed by nalgebra's scaling-and-squaring Padé exponential.
pub fn exp_itv(v: &ELinearMap, t: f64) -> ELinearMap {
    if t == 0.0 {
        return ELinearMap::identity(v.dim());
    }
    let scaled = v.as_matrix() * Complex64::new(0.0, -t);
    ELinearMap(scaled.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsometryReport {
    pub max_distortion: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HermitianReport {
    pub max_distortion: f64,
    pub worst_t: f64,
    pub samples: usize,
}

/// A linear map on `E`, stored as a `d x d` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ELinearMap(DMatrix<Complex64>);

impl ELinearMap {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        Ok(Self(m))
    }

    pub fn identity(d: usize) -> Self {
        Self(DMatrix::identity(d, d))
    }

    pub fn zeros(d: usize) -> Self {
        Self(DMatrix::zeros(d, d))
    }

    pub fn scalar(d: usize, s: Complex64) -> Self {
        Self(DMatrix::identity(d, d) * s)
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_row_slice(entries)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn apply(&self, v: &VectorValue) -> VectorValue {
        &self.0 * v
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn inverse(&self) -> Option<Self> {
        self.0.clone().try_inverse().map(Self)
    }

    /// Coefficients of `u ∘ M` for a functional `u`.
    pub fn pull_back(&self, u: &VectorValue) -> VectorValue {
        self.0.transpose() * u
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_entry_distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn operator_norm_bound(&self) -> f64 {
        // Frobenius norm dominates every l_p operator norm up to sqrt(d).
        self.0.norm() * (self.dim() as f64).sqrt()
    }
}

impl Serialize for ELinearMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_rows(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ELinearMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Pair>>::deserialize(d)?;
        let m = matrix_from_rows(&rows).map_err(serde::de::Error::custom)?;
        ELinearMap::new(m).map_err(serde::de::Error::custom)
    }
}

/// `Σ u_k v_k`.
pub fn pairing(u: &VectorValue, v: &VectorValue) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}
